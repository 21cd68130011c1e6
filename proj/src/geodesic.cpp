#include "dr/geodesic.hpp"

#include <cmath>

namespace dr {

namespace {

double chi(const TangentVec& xi, double theta) {
    double a = 1.0 - xi.s * theta;
    return a * a + xi.z.squaredNorm() * theta * theta;
}

} // namespace

AffinePoint gamma_eval(const Algebra& alg, const TangentVec& xi, double theta) {
    // chi has a real root only for z = 0, s != 0, namely the double root 1/s.
    if (xi.z.squaredNorm() < 1e-28 && std::abs(xi.s) > 1e-14 &&
        std::abs(theta - 1.0 / xi.s) <= 1e-7)
        throw PoleAtTheta("gamma_eval: theta within 1e-7 of the pole 1/s");
    double c = chi(xi, theta);
    if (std::abs(c) <= 1e-14) throw PoleAtTheta("gamma_eval: chi(theta) vanishes");

    AffinePoint p;
    p.V = (2.0 * theta * (1.0 - xi.s * theta) / c) * xi.v +
          (2.0 * theta * theta / c) * alg.j_apply(xi.z, xi.v);
    p.Z = (2.0 * theta / c) * xi.z;
    p.t = (1.0 - theta * theta) / c;
    return p;
}

Point geodesic_point(const Space& S, const ProlongedGeodesic& g, double t) {
    AffinePoint a = gamma_eval(S.algebra(), g.xi, std::tanh(0.5 * t));
    if (a.t <= 0.0) throw DomainError("geodesic_point: non-positive height");
    Point x{a.V, a.Z, a.t};
    return S.left_translate(g.base, x);
}

std::optional<AffinePoint> point_at_infinity(const Algebra& alg, const TangentVec& xi) {
    double q = xi.s * xi.s + xi.z.squaredNorm();
    if (std::abs(xi.v.norm() - 1.0) <= 1e-12 || q <= 1e-28) return std::nullopt;
    AffinePoint p;
    p.V = (-2.0 * xi.s / q) * xi.v + (2.0 / q) * alg.j_apply(xi.z, xi.v);
    p.Z = Vec::Zero(alg.m());
    p.t = -1.0 / q;
    return p;
}

ConicClass classify_conic(const Algebra& alg, const TangentVec& xi) {
    const double nv = xi.v.norm();
    const double nz = xi.z.norm();
    const double s = xi.s;
    ConicClass out;

    if (nz > 1e-12) {
        out.tag = ConicTag::Ellipse;
        Vec Ev = nv > 1e-12 ? Vec(xi.v / nv) : Vec(Vec::Zero(xi.v.size()));
        Vec Jzv = alg.j_apply(xi.z, xi.v);
        Vec Ej = nv > 1e-12 ? Vec(Jzv / (nv * nz)) : Vec(Vec::Zero(xi.v.size()));
        Vec Ez = xi.z / nz;
        out.residual = [=, &alg](double theta) {
            AffinePoint p = gamma_eval(alg, xi, theta);
            double Z = p.Z.dot(Ez);
            double W = p.t;
            if (nv <= 1e-12) {
                // circle in the (z, t) plane through e
                double circ = Z * Z + W * W - (2.0 * s / nz) * Z - 1.0;
                return std::max(std::abs(circ), p.V.norm());
            }
            double X = p.V.dot(Ev);
            double Y = p.V.dot(Ej);
            double plane1 = nz * X + s * Y - nv * Z;
            double plane2 = (1.0 - 0.5 * nv * nv) * Y - s * nv * Z + nv * nz * W - nv * nz;
            double circ = nz * (X * X + Y * Y) - 2.0 * nv * Y;
            return std::max({std::abs(plane1), std::abs(plane2), std::abs(circ)});
        };
    } else if (nv > 1e-12) {
        out.tag = ConicTag::Parabola;
        Vec Ev = xi.v / nv;
        out.residual = [=, &alg](double theta) {
            AffinePoint p = gamma_eval(alg, xi, theta);
            double X = p.V.dot(Ev);
            double W = p.t;
            double par = 4.0 * nv * nv * W + X * X - (2.0 * nv + s * X) * (2.0 * nv + s * X);
            double off = (p.V - X * Ev).norm();
            return std::max({std::abs(par), p.Z.norm(), off});
        };
    } else {
        out.tag = ConicTag::Line;
        out.residual = [=, &alg](double theta) {
            AffinePoint p = gamma_eval(alg, xi, theta);
            return p.V.norm() + p.Z.norm();
        };
    }
    return out;
}

double cross_ratio(const ExtReal& t1, const ExtReal& t2, const ExtReal& t3, const ExtReal& t4) {
    const ExtReal pts[4] = {t1, t2, t3, t4};
    auto det = [&](int i, int j) { return pts[i].a * pts[j].b - pts[j].a * pts[i].b; };
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(det(i, j)) <=
                1e-14 * std::max(std::abs(pts[i].a) + std::abs(pts[i].b),
                                 std::abs(pts[j].a) + std::abs(pts[j].b)))
                throw DegenerateRange("cross_ratio: repeated projective points");
    return (det(0, 2) * det(1, 3)) / (det(0, 3) * det(1, 2));
}

ExtReal harmonic_partner(const ExtReal& t) {
    if (t.b == 0.0) return ExtReal(0.0);
    if (t.a == 0.0) return ExtReal::infinity();
    return ExtReal(t.b / t.a);
}

} // namespace dr
