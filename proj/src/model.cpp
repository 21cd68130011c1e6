#include "dr/model.hpp"

#include <cmath>

namespace dr {

namespace {

double step(double h0, double coord) { return h0 * std::max(1.0, std::abs(coord)); }

} // namespace

Space::Space(Algebra alg) : alg_(std::move(alg)) {}

Point Space::identity() const { return {Vec::Zero(n()), Vec::Zero(m()), 1.0}; }

Point Space::multiply(const Point& p, const Point& q) const {
    double rt = std::sqrt(p.t);
    Point out;
    out.V = p.V + rt * q.V;
    out.Z = p.Z + p.t * q.Z + 0.5 * rt * alg_.bracket_v(p.V, q.V);
    out.t = p.t * q.t;
    return out;
}

Point Space::inverse(const Point& p) const {
    double rt = std::sqrt(p.t);
    return {-p.V / rt, -p.Z / p.t, 1.0 / p.t};
}

AffinePoint Space::left_translate(const Point& p, const AffinePoint& x) const {
    double rt = std::sqrt(p.t);
    AffinePoint out;
    out.V = p.V + rt * x.V;
    out.Z = p.Z + p.t * x.Z + 0.5 * rt * alg_.bracket_v(p.V, x.V);
    out.t = p.t * x.t;
    return out;
}

Point Space::left_translate(const Point& p, const Point& x) const {
    AffinePoint a = left_translate(p, to_affine(x));
    return {a.V, a.Z, a.t};
}

double Space::distance(const Point& x1, const Point& x0) const {
    double P = x1.t + x0.t + 0.25 * (x1.V - x0.V).squaredNorm();
    Vec Q = x1.Z - x0.Z + 0.5 * alg_.bracket_v(x1.V, x0.V);
    double D = (P * P + Q.squaredNorm()) / x1.t;
    double arg = 0.5 * std::sqrt(D / x0.t);
    if (arg < 1.0) {
        if (arg < 1.0 - 1e-12) throw DomainError("distance: arccosh argument below 1");
        arg = 1.0;
    }
    return 2.0 * std::acosh(arg);
}

FieldPartials Space::fd_partials(const ScalarField& f, const Point& x,
                                 const FdOptions& opts) const {
    auto d1 = [&](auto&& evalAt, double coord) {
        double h = step(opts.first_step, coord);
        if (opts.fourth_order) {
            return (-evalAt(2.0 * h) + 8.0 * evalAt(h) - 8.0 * evalAt(-h) + evalAt(-2.0 * h)) /
                   (12.0 * h);
        }
        return (evalAt(h) - evalAt(-h)) / (2.0 * h);
    };

    FieldPartials p;
    p.dv = Vec::Zero(n());
    p.dz = Vec::Zero(m());
    for (int i = 0; i < n(); ++i) {
        p.dv(i) = d1(
            [&](double d) {
                Point y = x;
                y.V(i) += d;
                return f.eval(y);
            },
            x.V(i));
    }
    for (int a = 0; a < m(); ++a) {
        p.dz(a) = d1(
            [&](double d) {
                Point y = x;
                y.Z(a) += d;
                return f.eval(y);
            },
            x.Z(a));
    }
    p.dt = d1(
        [&](double d) {
            Point y = x;
            y.t += d;
            return f.eval(y);
        },
        x.t);
    return p;
}

double Space::frame_grad_sq(const ScalarField& f, const Point& x, const FdOptions& opts) const {
    FieldPartials p = f.partials ? f.partials(x) : fd_partials(f, x, opts);
    double rt = std::sqrt(x.t);

    // W_alpha = J_alpha^T V, so that sum_j C_{ij,alpha} v_j = W_alpha(i)
    std::vector<Vec> W(m());
    for (int a = 0; a < m(); ++a) W[a] = alg_.J(a).transpose() * x.V;

    double acc = 0.0;
    for (int i = 0; i < n(); ++i) {
        double Ei = rt * p.dv(i);
        for (int a = 0; a < m(); ++a) Ei -= 0.5 * rt * W[a](i) * p.dz(a);
        acc += Ei * Ei;
    }
    for (int a = 0; a < m(); ++a) {
        double Fa = x.t * p.dz(a);
        acc += Fa * Fa;
    }
    double A = x.t * p.dt;
    return acc + A * A;
}

double Space::laplacian(const ScalarField& f, const Point& x, const FdOptions& opts) const {
    // Work in the (v, z, tau) chart with t = exp(tau); the vertical part of
    // the operator is d^2/dtau^2 - (m + n/2) d/dtau, which keeps the
    // stencils well conditioned near the boundary t -> 0.
    const double tau = std::log(x.t);
    const double f0 = f.eval(x);

    auto at = [&](int i, double dvi, int a, double dza, double dtau) {
        Point y = x;
        if (i >= 0) y.V(i) += dvi;
        if (a >= 0) y.Z(a) += dza;
        if (dtau != 0.0) y.t = std::exp(tau + dtau);
        return f.eval(y);
    };

    auto d2 = [&](auto&& evalAt) {
        double h = opts.second_step;
        if (opts.fourth_order) {
            return (-evalAt(2.0 * h) + 16.0 * evalAt(h) - 30.0 * f0 + 16.0 * evalAt(-h) -
                    evalAt(-2.0 * h)) /
                   (12.0 * h * h);
        }
        return (evalAt(h) - 2.0 * f0 + evalAt(-h)) / (h * h);
    };
    auto d1 = [&](auto&& evalAt) {
        double h = opts.second_step;
        if (opts.fourth_order) {
            return (-evalAt(2.0 * h) + 8.0 * evalAt(h) - 8.0 * evalAt(-h) + evalAt(-2.0 * h)) /
                   (12.0 * h);
        }
        return (evalAt(h) - evalAt(-h)) / (2.0 * h);
    };

    double sum_vv = 0.0;
    for (int i = 0; i < n(); ++i) sum_vv += d2([&](double d) { return at(i, d, -1, 0.0, 0.0); });

    double sum_zz = 0.0;
    for (int a = 0; a < m(); ++a) sum_zz += d2([&](double d) { return at(-1, 0.0, a, d, 0.0); });

    double dtt = d2([&](double d) { return at(-1, 0.0, -1, 0.0, d); });
    double dtau1 = d1([&](double d) { return at(-1, 0.0, -1, 0.0, d); });

    // mixed term t * sum_alpha sum_j (J_alpha v)_j  d_{v_j} d_{z_alpha}
    double mixed = 0.0;
    const double h = opts.second_step;
    for (int a = 0; a < m(); ++a) {
        Vec coef = alg_.J(a) * x.V;
        for (int j = 0; j < n(); ++j) {
            if (std::abs(coef(j)) < 1e-300) continue;
            double cross;
            if (opts.fourth_order) {
                static const double w[4] = {1.0, -8.0, 8.0, -1.0};
                static const double o[4] = {-2.0, -1.0, 1.0, 2.0};
                cross = 0.0;
                for (int p = 0; p < 4; ++p)
                    for (int q = 0; q < 4; ++q)
                        cross += w[p] * w[q] * at(j, o[p] * h, a, o[q] * h, 0.0);
                cross /= 144.0 * h * h;
            } else {
                cross = (at(j, h, a, h, 0.0) - at(j, h, a, -h, 0.0) - at(j, -h, a, h, 0.0) +
                         at(j, -h, a, -h, 0.0)) /
                        (4.0 * h * h);
            }
            mixed += coef(j) * cross;
        }
    }

    double t = x.t;
    return t * sum_vv + t * (t + 0.25 * x.V.squaredNorm()) * sum_zz + dtt -
           (m() + 0.5 * n()) * dtau1 + t * mixed;
}

} // namespace dr
