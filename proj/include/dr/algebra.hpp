#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dr/errors.hpp"

namespace dr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Tag of an irreducible Clifford module summand.  For m != 3 (mod 4) there is
// a single irreducible module `d`; for m = 3 (mod 4) there are two
// non-isomorphic ones `d1` (left multiplication type) and `d2` (right
// multiplication type).
enum class ModuleType { d, d1, d2 };

struct ModuleSummand {
    ModuleType type = ModuleType::d;
    int mult = 1;
};

// Input data for building a Damek-Ricci Lie algebra: either a list of
// irreducible-module tags with multiplicities, or explicit generator
// matrices.
struct CliffordSpec {
    int m = 0;
    std::vector<ModuleSummand> modules;
    std::vector<Mat> generators; // explicit n x n skew generators; empty if tag form

    bool explicit_form() const { return !generators.empty(); }
};

// Dimension of an irreducible Cl(m) module (real representation).
int irreducible_dim(int m);

struct ValidationEntry {
    std::string name;
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;

    double max_residual() const;
    bool passes(double tol) const { return max_residual() <= tol; }
};

// The nilpotent part n = v (+) z of a Damek-Ricci Lie algebra, held as the
// generator matrices J_alpha together with the structure constants
// C_{ij,alpha} = <J_alpha E_i, E_j>.  Immutable after construction.
class Algebra {
public:
    Algebra(CliffordSpec spec, std::vector<Mat> generators, int n);

    int m() const { return m_; }
    int n() const { return n_; }
    const CliffordSpec& spec() const { return spec_; }
    const std::vector<Mat>& generators() const { return J_; }
    const Mat& J(int alpha) const { return J_.at(alpha); }

    // C_{ij,alpha}
    double C(int i, int j, int alpha) const { return J_[alpha](j, i); }

    // J_Z V with J_Z = sum_alpha z_alpha J_alpha
    Vec j_apply(const Vec& Z, const Vec& V) const;

    // [U,V] in z, component alpha = <J_alpha U, V>
    Vec bracket_v(const Vec& U, const Vec& V) const;

    // Orthogonal projection of W onto J_z V (zero map if V = 0).
    Vec project_jzv(const Vec& V, const Vec& W) const;

private:
    CliffordSpec spec_;
    std::vector<Mat> J_;
    int m_ = 0;
    int n_ = 0;
};

Algebra build_algebra(const CliffordSpec& spec);

ValidationReport validate_clifford(const Algebra& alg, Rng& rng, int samples = 32);

struct J2Result {
    bool satisfied = false;
    double residual = 0.0;
};

// Numerical test of the J^2-condition for v: for orthogonal z1, z2 the
// vector J_{z1} J_{z2} v must stay in span{v, J_1 v, ..., J_m v}.
J2Result j2_satisfied(const Algebra& alg, const Vec& v, double tol, Rng& rng);
J2Result j2_satisfied(const Algebra& alg, const Vec& v, double tol);

// Classification-based prediction of the J^2-condition (tag-form specs only).
bool predict_j2_set(const CliffordSpec& spec, const Vec& v);

} // namespace dr
