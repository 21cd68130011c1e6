#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "dr/focal.hpp"
#include "dr/isoparametric.hpp"

using namespace dr;

namespace {

Space make_space(int m, std::vector<ModuleSummand> mods) {
    CliffordSpec s;
    s.m = m;
    s.modules = std::move(mods);
    return Space(build_algebra(s));
}

Vec gaussian(Rng& rng, int dim, double sigma = 1.0) {
    std::normal_distribution<double> g(0.0, sigma);
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = g(rng);
    return x;
}

// variety through e: t0 and Z0 are forced by V0
Fx0 through_e(const Vec& V0, int m) {
    return Fx0{AffinePoint{V0, Vec::Zero(m), -1.0 - 0.25 * V0.squaredNorm()}};
}

} // namespace

TEST_CASE("membership and parameterization of the paraboloid") {
    auto S = make_space(3, {{ModuleType::d1, 1}});
    Rng rng(3);
    Fx0 F{AffinePoint{gaussian(rng, 4, 0.5), gaussian(rng, 3, 0.5), -1.4}};
    double R = 2.0 * std::sqrt(1.4);

    SUBCASE("vertex and random parameters lie on the variety") {
        Point vert = upsilon(S, F, F.x0.V);
        CHECK((vert.V - F.x0.V).norm() == doctest::Approx(0.0));
        CHECK((vert.Z - F.x0.Z).norm() == doctest::Approx(0.0));
        CHECK(vert.t == doctest::Approx(1.4));
        CHECK(membership_residual(S, F, vert) <= 1e-14);
        for (int it = 0; it < 50; ++it) {
            Vec d = gaussian(rng, 4);
            Vec Vb = F.x0.V + (0.95 * R * std::cbrt(0.02 + 0.97 * (it / 49.0)) / d.norm()) * d;
            Point p = upsilon(S, F, Vb);
            CHECK(p.t > 0.0);
            CHECK(membership_residual(S, F, p) <= 1e-12);
        }
    }
    SUBCASE("outside the ball is rejected") {
        Vec d = Vec::Unit(4, 0);
        CHECK_THROWS_AS(upsilon(S, F, Vec(F.x0.V + R * d)), OutsideBall);
        CHECK_THROWS_AS(upsilon(S, F, Vec(F.x0.V + 2.0 * R * d)), OutsideBall);
        Fx0 bad{AffinePoint{F.x0.V, F.x0.Z, 0.5}};
        CHECK_THROWS_AS(upsilon(S, bad, F.x0.V), DomainError);
    }
    SUBCASE("e lies on the variety exactly under the vertex conditions") {
        Vec V0 = gaussian(rng, 4, 0.7);
        Fx0 good = through_e(V0, 3);
        CHECK(membership_residual(S, good, S.identity()) <= 1e-13);
        Fx0 off{AffinePoint{V0, Vec::Zero(3), good.x0.t + 0.1}};
        CHECK(membership_residual(S, off, S.identity()) > 1e-3);
        Fx0 off2{AffinePoint{V0, Vec::Unit(3, 0) * 0.1, good.x0.t}};
        CHECK(membership_residual(S, off2, S.identity()) > 1e-3);
    }
}

TEST_CASE("translation equivariance of the focal family") {
    auto S = make_space(3, {{ModuleType::d1, 1}, {ModuleType::d2, 1}});
    Rng rng(7);
    for (int it = 0; it < 30; ++it) {
        Fx0 F{AffinePoint{gaussian(rng, S.n(), 0.5), gaussian(rng, S.m(), 0.5), -0.9}};
        Point p = sample_points(S, 600 + it, 1)[0];
        Vec d = gaussian(rng, S.n());
        Vec Vb = F.x0.V + (0.8 * std::sqrt(0.9 * 4.0) / d.norm()) * d;
        Point y = S.left_translate(p, upsilon(S, F, Vb));
        Fx0 LF{S.left_translate(p, F.x0)};
        CHECK(membership_residual(S, LF, y) <= 1e-10);
    }
}

TEST_CASE("orthogonal velocities") {
    auto S = make_space(3, {{ModuleType::d1, 1}});
    Rng rng(11);
    Vec V0 = gaussian(rng, 4, 0.7);
    Fx0 F = through_e(V0, 3);
    double t0 = F.x0.t;

    SUBCASE("vertical parameter choice lands on x0 at infinity") {
        TangentVec xi = orthogonal_velocity(S, F, Vec::Zero(3), 1.0 / std::sqrt(-t0));
        CHECK(std::abs(xi.norm() - 1.0) <= 1e-12);
        auto lim = point_at_infinity(S.algebra(), xi);
        REQUIRE(lim.has_value());
        CHECK((lim->V - F.x0.V).norm() <= 1e-10);
        CHECK((lim->Z - F.x0.Z).norm() <= 1e-10);
        CHECK(std::abs(lim->t - t0) <= 1e-10);
    }
    SUBCASE("all admissible parameters reach x0 and are orthogonal to the variety") {
        for (int it = 0; it < 20; ++it) {
            Vec dir = gaussian(rng, 4);
            Vec z = gaussian(rng, 3);
            double s = 0.7 * (it % 2 ? 1.0 : -1.0);
            double scale = std::sqrt((-1.0 / t0) / (s * s + z.squaredNorm()));
            z *= scale;
            s *= scale;
            TangentVec xi = orthogonal_velocity(S, F, z, s);
            CHECK(std::abs(xi.norm() - 1.0) <= 1e-12);
            auto lim = point_at_infinity(S.algebra(), xi);
            REQUIRE(lim.has_value());
            CHECK((lim->V - F.x0.V).norm() + (lim->Z - F.x0.Z).norm() +
                      std::abs(lim->t - t0) <=
                  1e-10);
            // tangent vectors of F at e: (v', -[v',V0]/2, <v',V0>/2)
            for (int k = 0; k < 20; ++k) {
                Vec vp = gaussian(rng, 4);
                double ip = xi.v.dot(vp) -
                            0.5 * xi.z.dot(S.algebra().bracket_v(vp, V0)) +
                            xi.s * 0.5 * vp.dot(V0);
                CHECK(std::abs(ip) <= 1e-12 * (1.0 + vp.norm()));
            }
        }
    }
    SUBCASE("bad free parameters are rejected") {
        CHECK_THROWS_AS(orthogonal_velocity(S, F, Vec::Zero(3), 1.0), InvalidFreeParameters);
        Fx0 notE{AffinePoint{V0, Vec::Zero(3), -5.0}};
        CHECK_THROWS_AS(orthogonal_velocity(S, notE, Vec::Zero(3), 1.0 / std::sqrt(5.0)),
                        DomainError);
    }
    SUBCASE("harmonic range of e, x0 and the boundary points") {
        CHECK(cross_ratio(0.0, ExtReal::infinity(), 1.0, -1.0) ==
              doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("unique orthogonal foot along an orthogonal geodesic") {
    auto S = make_space(3, {{ModuleType::d1, 1}});
    Rng rng(13);
    for (int it = 0; it < 5; ++it) {
        Vec V0 = gaussian(rng, 4, 0.6);
        Fx0 F = through_e(V0, 3);
        Vec z = gaussian(rng, 3);
        double s = 0.5;
        double scale = std::sqrt((-1.0 / F.x0.t) / (s * s + z.squaredNorm()));
        z *= scale;
        s *= scale;
        TangentVec xi = orthogonal_velocity(S, F, z, s);
        ProlongedGeodesic g{S.identity(), xi};

        std::vector<double> res(1000);
        for (int k = 0; k < 1000; ++k) {
            double t = -5.0 + 10.0 * k / 999.0;
            res[k] = membership_residual(S, F, geodesic_point(S, g, t));
        }
        // exactly one near-zero local minimum, bracketing the single root
        int minima = 0, where = -1;
        for (int k = 1; k + 1 < 1000; ++k) {
            if (res[k] < res[k - 1] && res[k] < res[k + 1] && res[k] < 0.05) {
                ++minima;
                where = k;
            }
        }
        CHECK(minima == 1);
        REQUIRE(where > 0);
        CHECK(res[where] <= 0.02); // grid spacing bound, true root in between
        CHECK(std::abs(-5.0 + 10.0 * where / 999.0) <= 0.02);
    }
}

TEST_CASE("distance to the focal variety matches the tube radius") {
    auto S = make_space(3, {{ModuleType::d1, 1}});
    Rng rng(17);
    Fx0 F{AffinePoint{gaussian(rng, 4, 0.4), gaussian(rng, 3, 0.4), -1.0}};
    auto fn = IsoFn::distorted_distance(S, F.x0);

    SUBCASE("zero on the variety") {
        Vec Vb = F.x0.V + 0.6 * Vec::Unit(4, 1);
        CHECK(distance_to_focal(S, F, upsilon(S, F, Vb)) <= 1e-6);
    }
    SUBCASE("level sets sit at tube distance") {
        for (int it = 0; it < 5; ++it) {
            Point x = sample_points(S, 900 + it, 1)[0];
            double c = eval_D(S, F.x0, x);
            double r = tube_radius(fn, c);
            CHECK(std::abs(distance_to_focal(S, F, x) - r) <= 1e-6);
        }
    }
    SUBCASE("monotone along an orthogonal geodesic") {
        Vec V0 = gaussian(rng, 4, 0.5);
        Fx0 Fe = through_e(V0, 3);
        TangentVec xi = orthogonal_velocity(S, Fe, Vec::Zero(3), 1.0 / std::sqrt(-Fe.x0.t));
        ProlongedGeodesic g{S.identity(), xi};
        double prev = 0.0;
        for (double r : {0.4, 0.8, 1.2, 1.6}) {
            double d = distance_to_focal(S, Fe, geodesic_point(S, g, r));
            CHECK(d == doctest::Approx(r).epsilon(1e-5));
            CHECK(d > prev);
            prev = d;
        }
    }
}

TEST_CASE("totally geodesic criteria for the paraboloid") {
    Rng rng(23);

    SUBCASE("m=1: always totally geodesic") {
        auto S = make_space(1, {{ModuleType::d, 2}});
        Fx0 F{AffinePoint{gaussian(rng, 4, 0.4), gaussian(rng, 1, 0.4), -1.2}};
        for (int it = 0; it < 5; ++it) {
            Vec d = gaussian(rng, 4);
            Vec Vb = F.x0.V + (0.7 * std::sqrt(4.8) / d.norm()) * d;
            auto r = totally_geodesic_at(S, F, Vb);
            CHECK(r.flag);
            CHECK(r.residual <= 1e-8);
        }
    }
    SUBCASE("vertex parameter is always geodesic") {
        auto S = make_space(3, {{ModuleType::d1, 1}, {ModuleType::d2, 1}});
        Fx0 F{AffinePoint{gaussian(rng, 8, 0.4), gaussian(rng, 3, 0.4), -1.0}};
        auto r = totally_geodesic_at(S, F, F.x0.V);
        CHECK(r.flag);
        CHECK(r.residual <= 1e-8);
    }
    SUBCASE("m=3 d1+d2: mixed offsets escape, isotypic ones stay") {
        auto S = make_space(3, {{ModuleType::d1, 1}, {ModuleType::d2, 1}});
        Fx0 F{AffinePoint{gaussian(rng, 8, 0.3), gaussian(rng, 3, 0.3), -1.0}};
        Vec mixed = gaussian(rng, 8);
        mixed *= 0.8 / mixed.norm();
        auto bad = totally_geodesic_at(S, F, Vec(F.x0.V + mixed));
        CHECK_FALSE(bad.flag);
        CHECK(bad.residual >= 1e-3);

        Vec iso = gaussian(rng, 8);
        iso.tail(4).setZero();
        iso *= 0.8 / iso.norm();
        auto good = totally_geodesic_at(S, F, Vec(F.x0.V + iso));
        CHECK(good.flag);
        CHECK(good.residual <= 1e-8);
    }
}

TEST_CASE("totally geodesic criteria for the plane-type variety") {
    Rng rng(29);

    SUBCASE("J2 equivalence across the benchmark algebras") {
        struct Case {
            int m;
            std::vector<ModuleSummand> mods;
        };
        std::vector<Case> cases = {
            {1, {{ModuleType::d, 2}}},
            {3, {{ModuleType::d1, 1}, {ModuleType::d2, 1}}},
            {7, {{ModuleType::d1, 2}}},
        };
        for (const auto& c : cases) {
            CAPTURE(c.m);
            auto S = make_space(c.m, c.mods);
            for (int it = 0; it < 6; ++it) {
                Vec v = gaussian(rng, S.n());
                if (it % 2) v.tail(S.n() / 2).setZero(); // isotypic half
                v.normalize();
                FStar F{v, gaussian(rng, S.n(), 0.3), 0.2, 1.5};
                auto r = totally_geodesic_at(S, F);
                Rng jr(5);
                bool j2 = j2_satisfied(S.algebra(), v, 1e-8, jr).satisfied;
                CHECK(r.flag == j2);
                if (r.flag) {
                    CHECK(r.residual <= 1e-8);
                } else {
                    CHECK(r.residual >= 1e-3);
                }

                // constant Kahler angles iff J2
                Mat span(S.n(), S.m() + 1);
                span.col(0) = v;
                for (int a = 0; a < S.m(); ++a) span.col(a + 1) = S.algebra().J(a) * v;
                double spread = 0.0;
                Rng ur(77);
                for (int k = 0; k < 20; ++k) {
                    Vec u = span * gaussian(ur, S.m() + 1);
                    if (u.norm() < 1e-8) continue;
                    for (double ang : kahler_angles(S.algebra(), v, u))
                        spread = std::max(spread, ang);
                }
                if (j2) {
                    CHECK(spread <= 1e-6);
                } else {
                    CHECK(spread >= 1e-2);
                }
            }
        }
    }
    SUBCASE("tangent space has the right codimension") {
        auto S = make_space(3, {{ModuleType::d1, 2}});
        Vec v = gaussian(rng, S.n());
        v.normalize();
        Mat span(S.n(), S.m() + 1);
        span.col(0) = v;
        for (int a = 0; a < S.m(); ++a) span.col(a + 1) = S.algebra().J(a) * v;
        Eigen::JacobiSVD<Mat> svd(span);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-10) ++rank;
        CHECK(rank == S.m() + 1); // v-part of the tangent space has dim n-m-1
    }
}

TEST_CASE("kahler angles") {
    auto S = make_space(3, {{ModuleType::d1, 1}, {ModuleType::d2, 1}});
    Rng rng(31);

    SUBCASE("u = v gives zero angles") {
        Vec v = gaussian(rng, 8);
        for (double a : kahler_angles(S.algebra(), v, v)) CHECK(a <= 1e-6);
    }
    SUBCASE("rejects u outside the span") {
        Vec v = Vec::Unit(8, 0);
        Vec u = Vec::Unit(8, 5); // d2 block, outside span{v, Jz v} for d1 v
        CHECK_THROWS_AS(kahler_angles(S.algebra(), v, u), SubspaceViolation);
    }
    SUBCASE("mixed v yields a large angle for some u") {
        Vec v = gaussian(rng, 8);
        v.normalize();
        double worst = 0.0;
        Mat span(8, 4);
        span.col(0) = v;
        for (int a = 0; a < 3; ++a) span.col(a + 1) = S.algebra().J(a) * v;
        for (int k = 0; k < 30; ++k) {
            Vec u = span * gaussian(rng, 4);
            if (u.norm() < 1e-8) continue;
            for (double ang : kahler_angles(S.algebra(), v, u)) worst = std::max(worst, ang);
        }
        CHECK(worst > 1e-2);
    }
}
