#pragma once
#include <functional>
#include <optional>

#include "dr/algebra.hpp"

namespace dr {

// Point of the half-space model v (+) z x R_+ (t > 0).
struct Point {
    Vec V;
    Vec Z;
    double t = 1.0;
};

// Same components with unrestricted t, used for centers pushed past the
// boundary and for prolonged geodesics.
struct AffinePoint {
    Vec V;
    Vec Z;
    double t = 0.0;
};

inline AffinePoint to_affine(const Point& p) { return {p.V, p.Z, p.t}; }

struct TangentVec {
    Vec v;
    Vec z;
    double s = 0.0;

    double norm() const { return std::sqrt(v.squaredNorm() + z.squaredNorm() + s * s); }
};

// First partials of a scalar field in the (v, z, t) chart.
struct FieldPartials {
    Vec dv;
    Vec dz;
    double dt = 0.0;
};

// Scalar field on the half-space model, passed by evaluation callback plus
// optional analytic partials.  One derivative engine serves every
// isoparametric candidate.
struct ScalarField {
    std::function<double(const Point&)> eval;
    std::function<FieldPartials(const Point&)> partials; // may be empty
};

struct FdOptions {
    bool fourth_order = true;
    double first_step = 1e-5;   // scaled by max(1, |coordinate|)
    double second_step = 1e-2;  // laplacian stencils, see Space::laplacian
};

// Group structure, distance, and coordinate derivative operators of the
// Damek-Ricci space built from an algebra.
class Space {
public:
    explicit Space(Algebra alg);

    const Algebra& algebra() const { return alg_; }
    int m() const { return alg_.m(); }
    int n() const { return alg_.n(); }
    Point identity() const;

    Point multiply(const Point& p, const Point& q) const;
    Point inverse(const Point& p) const;
    AffinePoint left_translate(const Point& p, const AffinePoint& x) const;
    Point left_translate(const Point& p, const Point& x) const;

    double distance(const Point& x1, const Point& x0) const;

    double frame_grad_sq(const ScalarField& f, const Point& x,
                         const FdOptions& opts = {}) const;
    double laplacian(const ScalarField& f, const Point& x, const FdOptions& opts = {}) const;

    FieldPartials fd_partials(const ScalarField& f, const Point& x,
                              const FdOptions& opts = {}) const;

private:
    Algebra alg_;
};

} // namespace dr
