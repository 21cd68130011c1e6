#include "dr/algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace dr {

namespace {

// Basis-unit product in the quaternions (indices 0..3) and octonions
// (indices 0..7).  Octonion triples follow the cyclic convention
// e_a e_b = e_c for (a,b,c) in the list below.
constexpr std::array<std::array<int, 3>, 1> kQuatTriples = {{{1, 2, 3}}};
constexpr std::array<std::array<int, 3>, 7> kOctTriples = {{
    {1, 2, 4},
    {2, 3, 5},
    {3, 4, 6},
    {4, 5, 7},
    {5, 6, 1},
    {6, 7, 2},
    {7, 1, 3},
}};

struct UnitProduct {
    int sign;
    int index;
};

template <std::size_t K>
UnitProduct unit_mul(int a, int b, const std::array<std::array<int, 3>, K>& triples) {
    if (a == 0) return {1, b};
    if (b == 0) return {1, a};
    if (a == b) return {-1, 0};
    for (const auto& t : triples) {
        for (int r = 0; r < 3; ++r) {
            int x = t[r], y = t[(r + 1) % 3], z = t[(r + 2) % 3];
            if (a == x && b == y) return {1, z};
            if (a == y && b == x) return {-1, z};
        }
    }
    return {0, 0}; // unreachable for valid tables
}

template <std::size_t K>
Mat left_mul_matrix(int g, int dim, const std::array<std::array<int, 3>, K>& triples) {
    Mat L = Mat::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        auto [s, k] = unit_mul(g, j, triples);
        L(k, j) = s;
    }
    return L;
}

template <std::size_t K>
Mat right_mul_matrix(int g, int dim, const std::array<std::array<int, 3>, K>& triples) {
    Mat R = Mat::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        auto [s, k] = unit_mul(j, g, triples);
        R(k, j) = s;
    }
    return R;
}

Mat kron(const Mat& A, const Mat& B) {
    Mat K(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// Minimal generators of Cl(8) on R^16: double the octonion left
// multiplications and append the extra block rotation.
std::vector<Mat> cl8_generators() {
    std::vector<Mat> K;
    Mat Z8 = Mat::Zero(8, 8);
    for (int a = 1; a <= 7; ++a) {
        Mat L = left_mul_matrix(a, 8, kOctTriples);
        Mat G(16, 16);
        G << Z8, L, L, Z8;
        K.push_back(G);
    }
    Mat G(16, 16);
    G << Z8, -Mat::Identity(8, 8), Mat::Identity(8, 8), Z8;
    K.push_back(G);
    return K;
}

// Generators of one irreducible Cl(m) module.  For m >= 8 tensor the
// (m-8)-case with the Cl(8) module of dimension 16, using the Cl(8) volume
// element (symmetric, squares to +1, anticommutes with each Cl(8)
// generator).
std::vector<Mat> irreducible_generators(int m, ModuleType type) {
    if (m == 0) return {};
    if (m == 1) {
        Mat J(2, 2);
        J << 0, -1, 1, 0;
        return {J};
    }
    if (m == 2) {
        return {left_mul_matrix(1, 4, kQuatTriples), left_mul_matrix(2, 4, kQuatTriples)};
    }
    if (m == 3) {
        std::vector<Mat> J;
        for (int a = 1; a <= 3; ++a)
            J.push_back(type == ModuleType::d2 ? right_mul_matrix(a, 4, kQuatTriples)
                                               : left_mul_matrix(a, 4, kQuatTriples));
        return J;
    }
    if (m <= 6) {
        std::vector<Mat> J;
        for (int a = 1; a <= m; ++a) J.push_back(left_mul_matrix(a, 8, kOctTriples));
        return J;
    }
    if (m == 7) {
        std::vector<Mat> J;
        for (int a = 1; a <= 7; ++a)
            J.push_back(type == ModuleType::d2 ? right_mul_matrix(a, 8, kOctTriples)
                                               : left_mul_matrix(a, 8, kOctTriples));
        return J;
    }

    std::vector<Mat> base = irreducible_generators(m - 8, type);
    std::vector<Mat> K8 = cl8_generators();
    Mat omega = Mat::Identity(16, 16);
    for (const Mat& K : K8) omega = omega * K;

    int p = (m - 8 == 0) ? 1 : static_cast<int>(base[0].rows());
    Mat Ip = Mat::Identity(p, p);
    std::vector<Mat> J;
    for (const Mat& B : base) J.push_back(kron(B, omega));
    for (const Mat& K : K8) J.push_back(kron(Ip, K));
    return J;
}

Mat block_diag(const std::vector<Mat>& blocks) {
    int n = 0;
    for (const Mat& B : blocks) n += static_cast<int>(B.rows());
    Mat M = Mat::Zero(n, n);
    int off = 0;
    for (const Mat& B : blocks) {
        M.block(off, off, B.rows(), B.cols()) = B;
        off += static_cast<int>(B.rows());
    }
    return M;
}

double clifford_relation_residual(const std::vector<Mat>& J, int n) {
    double r = 0.0;
    Mat I = Mat::Identity(n, n);
    for (std::size_t a = 0; a < J.size(); ++a) {
        r = std::max(r, (J[a] + J[a].transpose()).cwiseAbs().maxCoeff());
        for (std::size_t b = a; b < J.size(); ++b) {
            double delta = (a == b) ? 2.0 : 0.0;
            r = std::max(r, (J[a] * J[b] + J[b] * J[a] + delta * I).cwiseAbs().maxCoeff());
        }
    }
    return r;
}

Vec gaussian(Rng& rng, int dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = g(rng);
    return x;
}

} // namespace

int irreducible_dim(int m) {
    if (m < 0) throw UnsupportedDimension("center dimension must be non-negative");
    int p = m / 8;
    int r = m % 8;
    static constexpr int shift[8] = {0, 1, 2, 2, 3, 3, 3, 3};
    return 1 << (4 * p + shift[r]);
}

double ValidationReport::max_residual() const {
    double r = 0.0;
    for (const auto& e : entries) r = std::max(r, e.residual);
    return r;
}

Algebra::Algebra(CliffordSpec spec, std::vector<Mat> generators, int n)
    : spec_(std::move(spec)), J_(std::move(generators)), m_(spec_.m), n_(n) {}

Vec Algebra::j_apply(const Vec& Z, const Vec& V) const {
    if (Z.size() != m_ || V.size() != n_)
        throw DimensionMismatch("j_apply: Z or V has wrong dimension");
    Vec out = Vec::Zero(n_);
    for (int a = 0; a < m_; ++a)
        if (Z(a) != 0.0) out += Z(a) * (J_[a] * V);
    return out;
}

Vec Algebra::bracket_v(const Vec& U, const Vec& V) const {
    if (U.size() != n_ || V.size() != n_)
        throw DimensionMismatch("bracket_v: U or V has wrong dimension");
    Vec out(m_);
    for (int a = 0; a < m_; ++a) out(a) = (J_[a] * U).dot(V);
    return out;
}

Vec Algebra::project_jzv(const Vec& V, const Vec& W) const {
    double nv2 = V.squaredNorm();
    if (nv2 == 0.0) return Vec::Zero(n_);
    Vec out = Vec::Zero(n_);
    for (int a = 0; a < m_; ++a) {
        Vec Jv = J_[a] * V;
        out += (W.dot(Jv) / nv2) * Jv;
    }
    return out;
}

Algebra build_algebra(const CliffordSpec& spec) {
    if (spec.m < 0) throw UnsupportedDimension("center dimension must be non-negative");

    if (spec.explicit_form()) {
        int n = static_cast<int>(spec.generators.front().rows());
        if (static_cast<int>(spec.generators.size()) != spec.m)
            throw InvalidGenerators("expected m generator matrices");
        for (const Mat& J : spec.generators)
            if (J.rows() != n || J.cols() != n)
                throw InvalidGenerators("generator matrices must be square and equally sized");
        if (clifford_relation_residual(spec.generators, n) > 1e-12)
            throw InvalidGenerators("explicit matrices fail the Clifford relations");
        return Algebra(spec, spec.generators, n);
    }

    bool mod4_3 = (spec.m % 4 == 3);
    for (const auto& s : spec.modules) {
        if (s.mult < 1) throw UnsupportedDimension("module multiplicity must be positive");
        if (s.type == ModuleType::d && mod4_3)
            throw UnsupportedDimension("tag d not allowed for m = 3 (mod 4)");
        if (s.type != ModuleType::d && !mod4_3)
            throw UnsupportedDimension("tags d1/d2 require m = 3 (mod 4)");
    }

    int n0 = irreducible_dim(spec.m);
    std::vector<ModuleType> block_types; // one entry per irreducible block, in order
    for (const auto& s : spec.modules)
        for (int k = 0; k < s.mult; ++k) block_types.push_back(s.type);

    int n = n0 * static_cast<int>(block_types.size());
    auto irr_left = irreducible_generators(spec.m, ModuleType::d1);
    auto irr_right = irreducible_generators(spec.m, ModuleType::d2);
    std::vector<Mat> J;
    for (int a = 0; a < spec.m; ++a) {
        std::vector<Mat> blocks;
        for (ModuleType t : block_types)
            blocks.push_back(t == ModuleType::d2 ? irr_right[a] : irr_left[a]);
        J.push_back(block_diag(blocks));
    }
    if (spec.m > 0 && !J.empty() && clifford_relation_residual(J, n) > 1e-12)
        throw UnsupportedDimension("constructed generators fail the Clifford relations");
    return Algebra(spec, std::move(J), n);
}

ValidationReport validate_clifford(const Algebra& alg, Rng& rng, int samples) {
    ValidationReport rep;
    const int m = alg.m(), n = alg.n();
    Mat I = Mat::Identity(n, n);

    double skew = 0.0, anti = 0.0, orth = 0.0;
    for (int a = 0; a < m; ++a) {
        skew = std::max(skew, (alg.J(a) + alg.J(a).transpose()).cwiseAbs().maxCoeff());
        orth = std::max(orth, (alg.J(a).transpose() * alg.J(a) - I).cwiseAbs().maxCoeff());
        for (int b = a; b < m; ++b) {
            double delta = (a == b) ? 2.0 : 0.0;
            anti = std::max(
                anti, (alg.J(a) * alg.J(b) + alg.J(b) * alg.J(a) + delta * I).cwiseAbs().maxCoeff());
        }
    }
    rep.entries.push_back({"generator_skewness", skew});
    rep.entries.push_back({"clifford_anticommutation", anti});
    rep.entries.push_back({"generator_orthogonality", orth});

    double isom = 0.0, skew_adj = 0.0, duality = 0.0, shift = 0.0, frame_sum = 0.0, proj = 0.0;
    for (int it = 0; it < samples; ++it) {
        Vec Z = gaussian(rng, m), X = gaussian(rng, m);
        Vec U = gaussian(rng, n), V = gaussian(rng, n), W = gaussian(rng, n);

        if (m > 0 && n > 0) {
            Vec JzU = alg.j_apply(Z, U), JzV = alg.j_apply(Z, V);
            isom = std::max(isom, std::abs(JzU.dot(JzV) - Z.squaredNorm() * U.dot(V)));
            skew_adj = std::max(skew_adj, std::abs(JzU.dot(V) + U.dot(JzV)));
            duality = std::max(duality, std::abs(alg.bracket_v(U, V).dot(Z) - JzU.dot(V)));

            Vec JxU = alg.j_apply(X, U), JxV = alg.j_apply(X, V);
            shift = std::max(shift, (alg.bracket_v(JxU, V) - alg.bracket_v(U, JxV) +
                                     2.0 * U.dot(V) * X)
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        if (n > 0) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                Vec Ei = Vec::Unit(n, i);
                acc += alg.bracket_v(Ei, V).dot(alg.bracket_v(Ei, W));
            }
            frame_sum = std::max(frame_sum, std::abs(acc - m * V.dot(W)));

            Vec lhs = alg.j_apply(alg.bracket_v(V, U), V);
            Vec rhs = V.squaredNorm() * alg.project_jzv(V, U);
            proj = std::max(proj, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    rep.entries.push_back({"jz_isometry", isom});
    rep.entries.push_back({"jz_skew_adjoint", skew_adj});
    rep.entries.push_back({"bracket_j_duality", duality});
    rep.entries.push_back({"bracket_jx_shift", shift});
    rep.entries.push_back({"bracket_frame_sum", frame_sum});
    rep.entries.push_back({"j_bracket_projection", proj});
    return rep;
}

J2Result j2_satisfied(const Algebra& alg, const Vec& v, double tol, Rng& rng) {
    const int m = alg.m(), n = alg.n();
    if (v.size() != n) throw DimensionMismatch("j2_satisfied: v has wrong dimension");
    double nv = v.norm();
    if (nv == 0.0) return {true, 0.0};

    // Orthonormal basis of span{v, J_1 v, ..., J_m v}; the J_alpha v are
    // mutually orthogonal and orthogonal to v of norm ||v||.
    Mat B(n, m + 1);
    B.col(0) = v / nv;
    for (int a = 0; a < m; ++a) B.col(a + 1) = (alg.J(a) * v) / nv;

    auto residual_of = [&](const Vec& w) {
        Vec r = w - B * (B.transpose() * w);
        return r.norm();
    };

    double res = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) res = std::max(res, residual_of(alg.J(a) * (alg.J(b) * v)));

    // A few random orthonormal pairs guard against basis-aligned accidents.
    if (m >= 2) {
        std::normal_distribution<double> g(0.0, 1.0);
        for (int it = 0; it < 10; ++it) {
            Vec z1(m), z2(m);
            for (int i = 0; i < m; ++i) {
                z1(i) = g(rng);
                z2(i) = g(rng);
            }
            if (z1.norm() < 1e-8) continue;
            z1.normalize();
            z2 -= z2.dot(z1) * z1;
            if (z2.norm() < 1e-8) continue;
            z2.normalize();
            res = std::max(res, residual_of(alg.j_apply(z1, alg.j_apply(z2, v))));
        }
    }
    return {res <= tol * nv * nv, res};
}

J2Result j2_satisfied(const Algebra& alg, const Vec& v, double tol) {
    Rng rng(0x9e3779b97f4a7c15ull);
    return j2_satisfied(alg, v, tol, rng);
}

bool predict_j2_set(const CliffordSpec& spec, const Vec& v) {
    if (spec.explicit_form())
        throw NotApplicable("predict_j2_set requires a tag-form spec");
    if (spec.m == 0 || spec.m == 1) return true;
    double nv = v.norm();
    if (nv == 0.0) return true;
    if (spec.m != 3 && spec.m != 7) return false;

    const int n0 = irreducible_dim(spec.m);
    struct Block {
        ModuleType type;
        Vec w;
    };
    std::vector<Block> nonzero;
    int off = 0;
    for (const auto& s : spec.modules) {
        for (int k = 0; k < s.mult; ++k) {
            Vec w = v.segment(off, n0);
            if (w.norm() > 1e-12 * nv) nonzero.push_back({s.type, w});
            off += n0;
        }
    }
    if (nonzero.empty()) return true;

    for (const auto& b : nonzero)
        if (b.type != nonzero.front().type) return false; // not isotypic

    if (spec.m == 7) {
        // All non-zero components must be real multiples of one vector.
        Vec w0 = nonzero.front().w.normalized();
        for (const auto& b : nonzero) {
            Vec r = b.w - b.w.dot(w0) * w0;
            if (r.norm() > 1e-10 * nv) return false;
        }
    }
    return true;
}

} // namespace dr
