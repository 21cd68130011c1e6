#pragma once
#include <functional>
#include <string>
#include <vector>

#include "dr/model.hpp"

namespace dr {

double eval_D(const Space& S, const AffinePoint& x0, const Point& x);
double eval_Dstar(const Space& S, const Point& base, const Vec& v, double s, const Point& x);
double eval_subsetF(const std::vector<int>& I, const Point& x);

enum class IsoKind { DistortedDistance, DStar, SubsetF, Constant };

// One isoparametric candidate together with its closed-form coefficient pair,
// so that lap f = a(f) and |grad f|^2 = b(f) are the identities under test.
class IsoFn {
public:
    static IsoFn distorted_distance(const Space& S, AffinePoint x0);
    static IsoFn dstar(const Space& S, Point base, Vec v, double s);
    static IsoFn subset_f(const Space& S, std::vector<int> I);
    static IsoFn constant(double value);

    IsoKind kind() const { return kind_; }
    double a(double x) const { return a_(x); }
    double b(double x) const { return b_(x); }
    double db(double x) const { return db_(x); }
    double min_level() const; // throws NoMinimum when the family has none

    double eval(const Point& x) const { return eval_(x); }
    FieldPartials partials(const Point& x) const { return partials_(x); }
    ScalarField field() const;

    const AffinePoint& center() const { return x0_; }
    double t0() const { return x0_.t; }
    const Vec& direction() const { return v_; }
    double slope() const { return s_; }
    const Point& base() const { return base_; }
    const std::vector<int>& subset() const { return I_; }

private:
    IsoKind kind_ = IsoKind::Constant;
    std::function<double(double)> a_, b_, db_;
    std::function<double(const Point&)> eval_;
    std::function<FieldPartials(const Point&)> partials_;
    AffinePoint x0_;
    Point base_;
    Vec v_;
    double s_ = 0.0;
    std::vector<int> I_;
};

struct VerifyRecord {
    std::string function;
    std::string identity; // "gradient" or "laplacian"
    double max_residual = 0.0;
    double mean_residual = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
};

struct VerifyReport {
    std::vector<VerifyRecord> records;
    bool passes(double tol_fd, double tol_exact) const;
};

std::vector<Point> sample_points(const Space& S, std::uint64_t seed, int count);

VerifyReport verify_isoparametric(const Space& S, const IsoFn& fn,
                                  const std::vector<Point>& sample, std::uint64_t seed = 0,
                                  const FdOptions& opts = {});

double tube_radius(const IsoFn& fn, double c);
double tube_radius_quadrature(const IsoFn& fn, double c, double tol = 1e-10);

enum class HypersurfaceKind { Sphere, Horosphere, Tube };
double mean_curvature(HypersurfaceKind kind, double r, int m, int n);
double mean_curvature_from_ab(const IsoFn& fn, double c);

double volume_density(double r, int m, int n);
double sphere_h_from_density(double r, int m, int n);

} // namespace dr
