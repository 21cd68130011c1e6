#pragma once
#include <functional>
#include <optional>

#include "dr/model.hpp"

namespace dr {

// Unit-speed geodesic through a base point, kept together with the initial
// velocity of the underlying geodesic through e.
struct ProlongedGeodesic {
    Point base;
    TangentVec xi;
};

enum class ConicTag { Ellipse, Parabola, Line };

// Classification of the projective closure of a geodesic together with an
// evaluator for the implicit equations it must satisfy.
struct ConicClass {
    ConicTag tag;
    std::function<double(double)> residual; // theta -> max implicit-equation residual
};

// Point of the extended line R u {inf}, stored projectively.
struct ExtReal {
    double a = 0.0;
    double b = 1.0; // value = a/b; (1,0) is the point at infinity

    ExtReal() = default;
    ExtReal(double x) : a(x), b(1.0) {}
    static ExtReal infinity() { return {1.0, 0.0}; }
    static ExtReal projective(double pa, double pb) { return {pa, pb}; }

private:
    ExtReal(double pa, double pb) : a(pa), b(pb) {}
};

AffinePoint gamma_eval(const Algebra& alg, const TangentVec& xi, double theta);
Point geodesic_point(const Space& S, const ProlongedGeodesic& g, double t);

// Value of the prolongation at theta = infinity; empty means the symbolic
// boundary point (the |v| = 1 case).
std::optional<AffinePoint> point_at_infinity(const Algebra& alg, const TangentVec& xi);

ConicClass classify_conic(const Algebra& alg, const TangentVec& xi);

double cross_ratio(const ExtReal& t1, const ExtReal& t2, const ExtReal& t3, const ExtReal& t4);
ExtReal harmonic_partner(const ExtReal& t);

} // namespace dr
