#include "dr/isoparametric.hpp"

#include <cmath>
#include <random>

namespace dr {

double eval_D(const Space& S, const AffinePoint& x0, const Point& x) {
    double P = x.t + x0.t + 0.25 * (x.V - x0.V).squaredNorm();
    Vec Q = x.Z - x0.Z + 0.5 * S.algebra().bracket_v(x.V, x0.V);
    return (P * P + Q.squaredNorm()) / x.t;
}

double eval_Dstar(const Space& S, const Point& base, const Vec& v, double s, const Point& x) {
    Vec d = x.V - base.V;
    double R = 2.0 * s * std::sqrt(base.t) - d.dot(v);
    Vec W = S.algebra().bracket_v(d, v);
    return (R * R + W.squaredNorm()) / x.t;
}

double eval_subsetF(const std::vector<int>& I, const Point& x) {
    double acc = 0.0;
    for (int i : I) acc += x.V(i) * x.V(i);
    return acc / x.t;
}

IsoFn IsoFn::distorted_distance(const Space& S, AffinePoint x0) {
    IsoFn f;
    f.kind_ = IsoKind::DistortedDistance;
    f.x0_ = std::move(x0);
    const double t0 = f.x0_.t;
    const double mn = S.m() + 0.5 * S.n();
    f.a_ = [mn, m = S.m(), t0](double x) { return (mn + 1.0) * x - 2.0 * (m + 1) * t0; };
    f.b_ = [t0](double x) { return x * x - 4.0 * t0 * x; };
    f.db_ = [t0](double x) { return 2.0 * x - 4.0 * t0; };
    const Space* Sp = &S;
    AffinePoint c = f.x0_;
    f.eval_ = [Sp, c](const Point& x) { return eval_D(*Sp, c, x); };
    f.partials_ = [Sp, c](const Point& x) {
        const Algebra& alg = Sp->algebra();
        double P = x.t + c.t + 0.25 * (x.V - c.V).squaredNorm();
        Vec Q = x.Z - c.Z + 0.5 * alg.bracket_v(x.V, c.V);
        double D = (P * P + Q.squaredNorm()) / x.t;
        FieldPartials p;
        p.dv = (P * (x.V - c.V) - alg.j_apply(Q, c.V)) / x.t;
        p.dz = 2.0 * Q / x.t;
        p.dt = (2.0 * P - D) / x.t;
        return p;
    };
    return f;
}

IsoFn IsoFn::dstar(const Space& S, Point base, Vec v, double s) {
    if (v.norm() < 1e-14) throw DomainError("dstar: v must be non-zero");
    if (std::abs(v.squaredNorm() + s * s - 1.0) > 1e-10)
        throw DomainError("dstar: (v,s) must satisfy s^2 + |v|^2 = 1");
    IsoFn f;
    f.kind_ = IsoKind::DStar;
    f.base_ = std::move(base);
    f.v_ = std::move(v);
    f.s_ = s;
    const double vv = f.v_.squaredNorm();
    const double mn = S.m() + 0.5 * S.n();
    f.a_ = [mn, m = S.m(), vv](double x) { return (mn + 1.0) * x + 2.0 * (m + 1) * vv; };
    f.b_ = [vv](double x) { return x * x + 4.0 * vv * x; };
    f.db_ = [vv](double x) { return 2.0 * x + 4.0 * vv; };
    const Space* Sp = &S;
    Point b = f.base_;
    Vec dir = f.v_;
    f.eval_ = [Sp, b, dir, s](const Point& x) { return eval_Dstar(*Sp, b, dir, s, x); };
    f.partials_ = [Sp, b, dir, s](const Point& x) {
        const Algebra& alg = Sp->algebra();
        Vec d = x.V - b.V;
        double R = 2.0 * s * std::sqrt(b.t) - d.dot(dir);
        Vec W = alg.bracket_v(d, dir);
        double D = (R * R + W.squaredNorm()) / x.t;
        FieldPartials p;
        p.dv = (-2.0 * R * dir - 2.0 * alg.j_apply(W, dir)) / x.t;
        p.dz = Vec::Zero(alg.m());
        p.dt = -D / x.t;
        return p;
    };
    return f;
}

IsoFn IsoFn::subset_f(const Space& S, std::vector<int> I) {
    for (int i : I)
        if (i < 0 || i >= S.n()) throw DomainError("subset_f: index out of range");
    IsoFn f;
    f.kind_ = IsoKind::SubsetF;
    f.I_ = std::move(I);
    const double mn = S.m() + 0.5 * S.n();
    const int k = static_cast<int>(f.I_.size());
    f.a_ = [mn, k](double x) { return (mn + 1.0) * x + 2.0 * k; };
    f.b_ = [](double x) { return x * x + 4.0 * x; };
    f.db_ = [](double x) { return 2.0 * x + 4.0; };
    std::vector<int> idx = f.I_;
    const int m = S.m();
    f.eval_ = [idx](const Point& x) { return eval_subsetF(idx, x); };
    f.partials_ = [idx, m](const Point& x) {
        FieldPartials p;
        p.dv = Vec::Zero(x.V.size());
        for (int i : idx) p.dv(i) = 2.0 * x.V(i) / x.t;
        p.dz = Vec::Zero(m);
        p.dt = -eval_subsetF(idx, x) / x.t;
        return p;
    };
    return f;
}

IsoFn IsoFn::constant(double value) {
    IsoFn f;
    f.kind_ = IsoKind::Constant;
    f.a_ = [](double) { return 0.0; };
    f.b_ = [](double) { return 0.0; };
    f.db_ = [](double) { return 0.0; };
    f.eval_ = [value](const Point&) { return value; };
    f.partials_ = [](const Point& x) {
        return FieldPartials{Vec::Zero(x.V.size()), Vec::Zero(x.Z.size()), 0.0};
    };
    return f;
}

double IsoFn::min_level() const {
    switch (kind_) {
        case IsoKind::DistortedDistance:
            if (x0_.t < 0.0) return 0.0;
            throw NoMinimum("distorted distance has no tube minimum for t0 >= 0");
        case IsoKind::DStar:
        case IsoKind::SubsetF:
            return 0.0;
        default:
            throw NoMinimum("constant function has no tube structure");
    }
}

ScalarField IsoFn::field() const {
    ScalarField f;
    f.eval = eval_;
    f.partials = partials_;
    return f;
}

bool VerifyReport::passes(double tol_fd, double tol_exact) const {
    for (const auto& r : records) {
        double tol = r.identity == "laplacian" ? tol_fd : tol_exact;
        if (!(r.max_residual <= tol)) return false;
    }
    return true;
}

std::vector<Point> sample_points(const Space& S, std::uint64_t seed, int count) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 0.5);
    std::uniform_real_distribution<double> u(std::log(0.05), std::log(20.0));
    std::vector<Point> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        Point p;
        p.V = Vec(S.n());
        p.Z = Vec(S.m());
        for (int i = 0; i < S.n(); ++i) p.V(i) = g(rng);
        for (int a = 0; a < S.m(); ++a) p.Z(a) = g(rng);
        p.t = std::exp(u(rng));
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

const char* kind_name(IsoKind k) {
    switch (k) {
        case IsoKind::DistortedDistance: return "distorted_distance";
        case IsoKind::DStar: return "dstar";
        case IsoKind::SubsetF: return "subset_f";
        default: return "constant";
    }
}

} // namespace

VerifyReport verify_isoparametric(const Space& S, const IsoFn& fn,
                                  const std::vector<Point>& sample, std::uint64_t seed,
                                  const FdOptions& opts) {
    ScalarField f = fn.field();
    double gmax = 0.0, gsum = 0.0, lmax = 0.0, lsum = 0.0;
    for (const Point& x : sample) {
        if (x.t < 0.05 - 1e-12) throw DomainError("verify_isoparametric: t below 0.05");
        double val = fn.eval(x);
        double gres = std::abs(S.frame_grad_sq(f, x, opts) - fn.b(val));
        double lres = std::abs(S.laplacian(f, x, opts) - fn.a(val));
        gmax = std::max(gmax, gres);
        gsum += gres;
        lmax = std::max(lmax, lres);
        lsum += lres;
    }
    const int ns = static_cast<int>(sample.size());
    VerifyReport rep;
    rep.records.push_back(
        {kind_name(fn.kind()), "gradient", gmax, ns ? gsum / ns : 0.0, ns, seed});
    rep.records.push_back(
        {kind_name(fn.kind()), "laplacian", lmax, ns ? lsum / ns : 0.0, ns, seed});
    return rep;
}

double tube_radius(const IsoFn& fn, double c) {
    double c0 = fn.min_level();
    if (!(c > c0)) throw DomainError("tube_radius: level must exceed the minimum");
    switch (fn.kind()) {
        case IsoKind::DistortedDistance:
            return 2.0 * std::asinh(std::sqrt(c / (-4.0 * fn.t0())));
        case IsoKind::DStar:
            return 2.0 * std::asinh(std::sqrt(c / (4.0 * fn.direction().squaredNorm())));
        default:
            return 2.0 * std::asinh(std::sqrt(c / 4.0));
    }
}

namespace {

double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double tube_radius_quadrature(const IsoFn& fn, double c, double tol) {
    double c0 = fn.min_level();
    if (!(c > c0)) throw DomainError("tube_radius_quadrature: level must exceed the minimum");
    // substitute x = c0 + u^2 so the x^{-1/2} endpoint becomes regular
    auto g = [&](double u) {
        double x = c0 + u * u;
        double bx = fn.b(x);
        if (bx <= 0.0) return 2.0 / std::sqrt(fn.db(c0));
        return 2.0 * u / std::sqrt(bx);
    };
    double a = 0.0, b = std::sqrt(c - c0);
    double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(g, a, b, fa, fm, fb, whole, tol, 48);
}

double mean_curvature(HypersurfaceKind kind, double r, int m, int n) {
    switch (kind) {
        case HypersurfaceKind::Sphere:
            if (r <= 0.0) throw DomainError("mean_curvature: radius must be positive");
            return -0.5 * (m + n) / std::tanh(0.5 * r) - 0.5 * m * std::tanh(0.5 * r);
        case HypersurfaceKind::Horosphere:
            return -(m + 0.5 * n);
        default:
            if (r <= 0.0) throw DomainError("mean_curvature: radius must be positive");
            return -0.5 * (m + n) * std::tanh(0.5 * r) - 0.5 * m / std::tanh(0.5 * r);
    }
}

double mean_curvature_from_ab(const IsoFn& fn, double c) {
    double bc = fn.b(c);
    if (bc <= 0.0) throw DomainError("mean_curvature_from_ab: b(c) must be positive");
    return (-2.0 * fn.a(c) + fn.db(c)) / (2.0 * std::sqrt(bc));
}

double volume_density(double r, int m, int n) {
    if (r <= 0.0) throw DomainError("volume_density: radius must be positive");
    double h = 0.5 * r;
    return std::pow(std::cosh(h), m) * std::pow(std::sinh(h) / h, m + n);
}

double sphere_h_from_density(double r, int m, int n) {
    if (r <= 0.0) throw DomainError("sphere_h_from_density: radius must be positive");
    // h = -d/dr ln(r^{m+n} omega) with the powers of r cancelling analytically
    double hh = 0.5 * r;
    return -(0.5 * m * std::tanh(hh) + 0.5 * (m + n) / std::tanh(hh));
}

} // namespace dr
