#pragma once
#include <variant>
#include <vector>

#include "dr/geodesic.hpp"
#include "dr/model.hpp"

namespace dr {

// Paraboloid-type focal variety of a distorted distance with t0 < 0.
struct Fx0 {
    AffinePoint x0;
};

// Plane-type focal variety attached to a parabola-shaped prolonged geodesic.
struct FStar {
    Vec v;    // non-zero
    Vec Vbar;
    double s = 0.0;
    double tbar = 1.0;
};

using FocalVariety = std::variant<Fx0, FStar>;

double membership_residual(const Space& S, const FocalVariety& F, const Point& x);

Point upsilon(const Space& S, const Fx0& F, const Vec& Vbar);

// Unit velocity at e of a geodesic meeting the variety orthogonally there;
// (z, s) are the free parameters on the admissible sphere.
TangentVec orthogonal_velocity(const Space& S, const Fx0& F, const Vec& z, double s);

double distance_to_focal(const Space& S, const Fx0& F, const Point& x,
                         std::uint64_t seed = 1);

struct TotallyGeodesicResult {
    bool flag = false;
    double residual = 0.0;
};

TotallyGeodesicResult totally_geodesic_at(const Space& S, const Fx0& F, const Vec& Vbar);
TotallyGeodesicResult totally_geodesic_at(const Space& S, const FStar& F);

std::vector<double> kahler_angles(const Algebra& alg, const Vec& v, const Vec& u);

} // namespace dr
