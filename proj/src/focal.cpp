#include "dr/focal.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <random>

namespace dr {

namespace {

Vec gaussian(Rng& rng, int dim) {
    std::normal_distribution<double> g;
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = g(rng);
    return x;
}

// Orthonormal basis of the span of the columns of M.
Mat orthonormal_span(const Mat& M, double tol = 1e-10) {
    Eigen::ColPivHouseholderQR<Mat> qr(M);
    qr.setThreshold(tol);
    long r = qr.rank();
    Mat Q = qr.householderQ() * Mat::Identity(M.rows(), r);
    return Q;
}

// Coordinate tangent vector at p expressed as a velocity at e through dL_{p^-1}.
TangentVec frame_velocity(const Space& S, const Point& p, const Vec& wv, const Vec& wz,
                          double wt) {
    TangentVec xi;
    double rt = std::sqrt(p.t);
    xi.v = wv / rt;
    xi.z = wz / p.t - S.algebra().bracket_v(p.V, wv) / (2.0 * p.t);
    xi.s = wt / p.t;
    double nn = xi.norm();
    if (nn > 0.0) {
        xi.v /= nn;
        xi.z /= nn;
        xi.s /= nn;
    }
    return xi;
}

double escape_residual(const Space& S, const FocalVariety& F, const Point& p,
                       const TangentVec& xi) {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        double theta = -0.9 + 1.8 * k / 9.0;
        AffinePoint g = gamma_eval(S.algebra(), xi, theta);
        Point y = S.left_translate(p, Point{g.V, g.Z, g.t});
        worst = std::max(worst, membership_residual(S, F, y));
    }
    return worst;
}

} // namespace

double membership_residual(const Space& S, const FocalVariety& F, const Point& x) {
    if (const Fx0* f = std::get_if<Fx0>(&F)) {
        double r1 = std::abs((x.V - f->x0.V).squaredNorm() + 4.0 * (x.t + f->x0.t));
        double r2 = (x.Z - f->x0.Z + 0.5 * S.algebra().bracket_v(x.V, f->x0.V)).norm();
        return std::max(r1, r2);
    }
    const FStar& f = std::get<FStar>(F);
    Vec d = x.V - f.Vbar;
    double r1 = S.algebra().bracket_v(d, f.v).norm();
    double r2 = std::abs(d.dot(f.v) - 2.0 * f.s * std::sqrt(f.tbar));
    return std::max(r1, r2);
}

Point upsilon(const Space& S, const Fx0& F, const Vec& Vbar) {
    double t0 = F.x0.t;
    if (t0 >= 0.0) throw DomainError("upsilon: requires t0 < 0");
    double rad2 = -4.0 * t0;
    double d2 = (Vbar - F.x0.V).squaredNorm();
    if (d2 >= rad2) throw OutsideBall("upsilon: parameter outside the open ball");
    Point p;
    p.V = Vbar;
    p.Z = F.x0.Z - 0.5 * S.algebra().bracket_v(Vbar, F.x0.V);
    p.t = -t0 - 0.25 * d2;
    return p;
}

TangentVec orthogonal_velocity(const Space& S, const Fx0& F, const Vec& z, double s) {
    Point e = S.identity();
    if (membership_residual(S, F, e) > 1e-10)
        throw DomainError("orthogonal_velocity: variety does not pass through e");
    double t0 = F.x0.t;
    if (std::abs(s * s + z.squaredNorm() + 1.0 / t0) > 1e-10)
        throw InvalidFreeParameters("orthogonal_velocity: (z,s) off the admissible sphere");
    TangentVec xi;
    xi.v = -0.5 * (s * F.x0.V + S.algebra().j_apply(z, F.x0.V));
    xi.z = z;
    xi.s = s;
    return xi;
}

namespace {

double nelder_mead(const std::function<double(const Vec&)>& f, Vec x, double step, Vec* argmin) {
    const int n = static_cast<int>(x.size());
    std::vector<Vec> pts(n + 1, x);
    std::vector<double> val(n + 1);
    for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
    for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

    auto order = [&] {
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
        std::vector<Vec> p2;
        std::vector<double> v2;
        for (int i : idx) {
            p2.push_back(pts[i]);
            v2.push_back(val[i]);
        }
        pts = p2;
        val = v2;
    };

    for (int it = 0; it < 400 * n; ++it) {
        order();
        if (val[n] - val[0] < 1e-12 && (pts[n] - pts[0]).norm() < 1e-9) break;
        Vec c = Vec::Zero(n);
        for (int i = 0; i < n; ++i) c += pts[i];
        c /= n;
        Vec xr = c + (c - pts[n]);
        double fr = f(xr);
        if (fr < val[0]) {
            Vec xe = c + 2.0 * (c - pts[n]);
            double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                val[n] = fe;
            } else {
                pts[n] = xr;
                val[n] = fr;
            }
        } else if (fr < val[n - 1]) {
            pts[n] = xr;
            val[n] = fr;
        } else {
            Vec xc = c + 0.5 * (pts[n] - c);
            double fc = f(xc);
            if (fc < val[n]) {
                pts[n] = xc;
                val[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    if (argmin) *argmin = pts[0];
    return val[0];
}

} // namespace

double distance_to_focal(const Space& S, const Fx0& F, const Point& x, std::uint64_t seed) {
    double t0 = F.x0.t;
    if (t0 >= 0.0) throw DomainError("distance_to_focal: requires t0 < 0");
    double R = 2.0 * std::sqrt(-t0);
    const double margin = R * (1.0 - 1e-6);

    auto objective = [&](const Vec& Vbar) {
        double d = (Vbar - F.x0.V).norm();
        if (d >= margin) return 1e6 + d;
        return S.distance(x, upsilon(S, F, Vbar));
    };

    Rng rng(seed);
    std::vector<double> results;
    for (int start = 0; start < 8; ++start) {
        Vec init;
        if (start == 0) {
            Vec d = x.V - F.x0.V;
            double nn = d.norm();
            init = F.x0.V + (nn > 1e-12 ? Vec(std::min(nn, 0.5 * R) / nn * d)
                                        : Vec(Vec::Zero(S.n())));
        } else {
            Vec d = gaussian(rng, S.n());
            init = F.x0.V + (0.4 * R / d.norm()) * d;
        }
        results.push_back(nelder_mead(objective, init, 0.1 * R, nullptr));
    }
    std::sort(results.begin(), results.end());
    if (results[1] - results[0] > 1e-4)
        throw ConvergenceFailure("distance_to_focal: starts disagree");
    return results[0];
}

TotallyGeodesicResult totally_geodesic_at(const Space& S, const Fx0& F, const Vec& Vbar) {
    const Algebra& alg = S.algebra();
    Point p = upsilon(S, F, Vbar);
    Rng rng(12345);
    TotallyGeodesicResult out;
    out.flag = j2_satisfied(alg, Vec(Vbar - F.x0.V), 1e-8, rng).satisfied;

    FocalVariety FV = F;
    for (int dir = 0; dir < 10; ++dir) {
        Vec vp = gaussian(rng, S.n());
        vp.normalize();
        Vec wz = -0.5 * alg.bracket_v(vp, F.x0.V);
        double wt = -0.5 * vp.dot(Vbar - F.x0.V);
        TangentVec xi = frame_velocity(S, p, vp, wz, wt);
        out.residual = std::max(out.residual, escape_residual(S, FV, p, xi));
    }
    return out;
}

TotallyGeodesicResult totally_geodesic_at(const Space& S, const FStar& F) {
    const Algebra& alg = S.algebra();
    if (F.v.norm() < 1e-14) throw DomainError("totally_geodesic_at: v must be non-zero");
    Rng rng(54321);
    TotallyGeodesicResult out;
    out.flag = j2_satisfied(alg, F.v, 1e-8, rng).satisfied;

    // translate so the variety passes through e with the same direction data
    FStar canon;
    canon.v = F.v;
    canon.Vbar = Vec::Zero(S.n());
    canon.s = 0.0;
    canon.tbar = 1.0;
    FocalVariety FV = canon;

    Mat span(S.n(), S.m() + 1);
    span.col(0) = F.v;
    for (int a = 0; a < S.m(); ++a) span.col(a + 1) = alg.J(a) * F.v;
    Mat Q = orthonormal_span(span);
    Mat P = Mat::Identity(S.n(), S.n()) - Q * Q.transpose();

    Point e = S.identity();
    std::normal_distribution<double> g;
    for (int dir = 0; dir < 10; ++dir) {
        Vec vp = P * gaussian(rng, S.n());
        if (vp.norm() < 1e-8) continue;
        TangentVec xi;
        xi.v = vp;
        xi.z = gaussian(rng, S.m());
        xi.s = g(rng);
        double nn = xi.norm();
        xi.v /= nn;
        xi.z /= nn;
        xi.s /= nn;
        out.residual = std::max(out.residual, escape_residual(S, FV, e, xi));
    }
    return out;
}

std::vector<double> kahler_angles(const Algebra& alg, const Vec& v, const Vec& u) {
    if (v.norm() < 1e-14 || u.norm() < 1e-14)
        throw DomainError("kahler_angles: vectors must be non-zero");
    const int n = alg.n(), m = alg.m();

    Mat span(n, m + 1);
    span.col(0) = v;
    for (int a = 0; a < m; ++a) span.col(a + 1) = alg.J(a) * v;
    Mat Qw = orthonormal_span(span);
    if ((u - Qw * (Qw.transpose() * u)).norm() > 1e-10 * u.norm())
        throw SubspaceViolation("kahler_angles: u outside span{v, Jz v}");

    Mat Ju(n, m);
    for (int a = 0; a < m; ++a) Ju.col(a) = alg.J(a) * u;
    Mat Qu = orthonormal_span(Ju);

    Eigen::JacobiSVD<Mat> svd(Qu.transpose() * Qw);
    std::vector<double> angles;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
        angles.push_back(std::acos(c));
    }
    while (static_cast<int>(angles.size()) < m) angles.push_back(0.5 * M_PI);
    return angles;
}

} // namespace dr
