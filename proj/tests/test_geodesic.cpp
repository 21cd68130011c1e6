#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dr/geodesic.hpp"

using namespace dr;

namespace {

Space make_space(int m, std::vector<ModuleSummand> mods) {
    CliffordSpec s;
    s.m = m;
    s.modules = std::move(mods);
    return Space(build_algebra(s));
}

Vec gaussian(Rng& rng, int dim) {
    std::normal_distribution<double> g;
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = g(rng);
    return x;
}

TangentVec random_unit(Rng& rng, int n, int m) {
    TangentVec xi;
    xi.v = gaussian(rng, n);
    xi.z = gaussian(rng, m);
    std::normal_distribution<double> g;
    xi.s = g(rng);
    double nn = xi.norm();
    xi.v /= nn;
    xi.z /= nn;
    xi.s /= nn;
    return xi;
}

Point random_point(Rng& rng, int n, int m) {
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    return {0.7 * gaussian(rng, n), 0.7 * gaussian(rng, m), std::exp(u(rng))};
}

} // namespace

TEST_CASE("gamma at zero is the identity") {
    auto S = make_space(3, {{ModuleType::d1, 1}});
    Rng rng(1);
    for (int it = 0; it < 10; ++it) {
        auto p = gamma_eval(S.algebra(), random_unit(rng, 4, 3), 0.0);
        CHECK(p.V.norm() == doctest::Approx(0.0));
        CHECK(p.Z.norm() == doctest::Approx(0.0));
        CHECK(p.t == doctest::Approx(1.0));
    }
}

TEST_CASE("vertical velocity traces the projective line") {
    auto S = make_space(1, {{ModuleType::d, 1}});
    TangentVec xi{Vec::Zero(2), Vec::Zero(1), 1.0};
    for (double th : {-0.9, -0.3, 0.0, 0.4, 0.99}) {
        auto p = gamma_eval(S.algebra(), xi, th);
        CHECK(p.V.norm() == doctest::Approx(0.0));
        CHECK(p.Z.norm() == doctest::Approx(0.0));
        CHECK(p.t == doctest::Approx((1.0 + th) / (1.0 - th)).epsilon(1e-13));
    }
}

TEST_CASE("pole handling for z = 0 velocities") {
    auto S = make_space(2, {{ModuleType::d, 1}});
    TangentVec xi{Vec::Unit(4, 0) * 0.8, Vec::Zero(2), 0.6};
    CHECK_THROWS_AS(gamma_eval(S.algebra(), xi, 1.0 / 0.6), PoleAtTheta);
    CHECK_THROWS_AS(gamma_eval(S.algebra(), xi, 1.0 / 0.6 + 1e-8), PoleAtTheta);
    CHECK_NOTHROW(gamma_eval(S.algebra(), xi, 1.0 / 0.6 + 1e-3));
    // z != 0 means chi never vanishes
    TangentVec el = xi;
    el.z = Vec::Unit(2, 0) * 0.3;
    el.v *= 0.9;
    CHECK_NOTHROW(gamma_eval(S.algebra(), el, 1.0 / el.s));
}

TEST_CASE("unit speed against the distance oracle") {
    auto S = make_space(3, {{ModuleType::d1, 1}, {ModuleType::d2, 1}});
    Rng rng(97);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int it = 0; it < 100; ++it) {
        ProlongedGeodesic g{random_point(rng, S.n(), S.m()), random_unit(rng, S.n(), S.m())};
        CHECK(std::abs(g.xi.norm() - 1.0) <= 1e-12);
        for (int k = 0; k < 5; ++k) {
            double t1 = u(rng), t2 = u(rng);
            double d = S.distance(geodesic_point(S, g, t1), geodesic_point(S, g, t2));
            CHECK(std::abs(d - std::abs(t1 - t2)) <= 1e-9);
        }
        // base point recovered at t = 0
        Point b = geodesic_point(S, g, 0.0);
        CHECK((b.V - g.base.V).norm() <= 1e-13);
        CHECK((b.Z - g.base.Z).norm() <= 1e-13);
    }
}

TEST_CASE("point at infinity") {
    auto S = make_space(3, {{ModuleType::d1, 1}});
    Rng rng(19);

    SUBCASE("|v| = 1 gives the symbolic point") {
        TangentVec xi{Vec::Unit(4, 1), Vec::Zero(3), 0.0};
        CHECK_FALSE(point_at_infinity(S.algebra(), xi).has_value());
    }
    SUBCASE("v = 0 lands on the axis") {
        TangentVec xi{Vec::Zero(4), Vec::Zero(3), 0.0};
        xi.z = Vec::Unit(3, 0) * 0.8;
        xi.s = 0.6;
        auto p = point_at_infinity(S.algebra(), xi);
        REQUIRE(p.has_value());
        CHECK(p->V.norm() == doctest::Approx(0.0));
        CHECK(p->Z.norm() == doctest::Approx(0.0));
        CHECK(p->t == doctest::Approx(-1.0));
    }
    SUBCASE("gamma converges to it as theta grows") {
        for (int it = 0; it < 20; ++it) {
            TangentVec xi = random_unit(rng, 4, 3);
            if (std::abs(xi.v.norm() - 1.0) < 1e-3) continue;
            auto lim = point_at_infinity(S.algebra(), xi);
            REQUIRE(lim.has_value());
            auto res = [&](double T) {
                auto p = gamma_eval(S.algebra(), xi, T);
                return (p.V - lim->V).norm() + (p.Z - lim->Z).norm() + std::abs(p.t - lim->t);
            };
            double r6 = res(1e6), r7 = res(1e7);
            CHECK(r6 <= 1e-3);
            CHECK(r7 <= 0.2 * r6);
        }
    }
}

TEST_CASE("conic classification and implicit residuals") {
    auto S = make_space(3, {{ModuleType::d1, 2}});
    Rng rng(31);
    auto grid_max = [&](const ConicClass& c, const TangentVec& xi) {
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            double th = -0.95 + 1.9 * k / 49.0;
            if (xi.z.norm() < 1e-12 && std::abs(xi.s) > 1e-12 &&
                std::abs(th - 1.0 / xi.s) < 1e-2)
                continue;
            worst = std::max(worst, c.residual(th));
        }
        return worst;
    };

    SUBCASE("z != 0 is an ellipse") {
        for (int it = 0; it < 30; ++it) {
            TangentVec xi = random_unit(rng, S.n(), S.m());
            auto c = classify_conic(S.algebra(), xi);
            CHECK(c.tag == ConicTag::Ellipse);
            CHECK(grid_max(c, xi) <= 1e-10);
        }
    }
    SUBCASE("v = 0 circle case") {
        TangentVec xi{Vec::Zero(S.n()), Vec::Zero(S.m()), 0.0};
        xi.z = gaussian(rng, S.m());
        xi.s = 0.4;
        double nn = xi.norm();
        xi.z /= nn;
        xi.s /= nn;
        auto c = classify_conic(S.algebra(), xi);
        CHECK(c.tag == ConicTag::Ellipse);
        CHECK(grid_max(c, xi) <= 1e-10);
    }
    SUBCASE("z = 0, v != 0 is a parabola") {
        for (int it = 0; it < 30; ++it) {
            TangentVec xi{gaussian(rng, S.n()), Vec::Zero(S.m()), 0.3};
            double nn = xi.norm();
            xi.v /= nn;
            xi.s /= nn;
            auto c = classify_conic(S.algebra(), xi);
            CHECK(c.tag == ConicTag::Parabola);
            CHECK(grid_max(c, xi) <= 1e-10);
        }
    }
    SUBCASE("v = z = 0 is a line") {
        TangentVec xi{Vec::Zero(S.n()), Vec::Zero(S.m()), 1.0};
        auto c = classify_conic(S.algebra(), xi);
        CHECK(c.tag == ConicTag::Line);
        CHECK(grid_max(c, xi) <= 1e-12);
    }
}

TEST_CASE("left translation is affine, so conics map to conics") {
    auto S = make_space(3, {{ModuleType::d1, 1}});
    Rng rng(53);
    for (int it = 0; it < 30; ++it) {
        Point p = random_point(rng, S.n(), S.m());
        AffinePoint x{gaussian(rng, S.n()), gaussian(rng, S.m()), -1.5};
        AffinePoint y{gaussian(rng, S.n()), gaussian(rng, S.m()), 2.0};
        double lam = 0.37;
        AffinePoint mix{lam * x.V + (1 - lam) * y.V, lam * x.Z + (1 - lam) * y.Z,
                        lam * x.t + (1 - lam) * y.t};
        AffinePoint Lx = S.left_translate(p, x), Ly = S.left_translate(p, y),
                    Lm = S.left_translate(p, mix);
        CHECK((Lm.V - lam * Lx.V - (1 - lam) * Ly.V).norm() <= 1e-10);
        CHECK((Lm.Z - lam * Lx.Z - (1 - lam) * Ly.Z).norm() <= 1e-10);
        CHECK(std::abs(Lm.t - lam * Lx.t - (1 - lam) * Ly.t) <= 1e-10);
    }
}

TEST_CASE("cross ratio") {
    CHECK(cross_ratio(2.0, 0.5, 1.0, -1.0) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(cross_ratio(0.0, ExtReal::infinity(), 1.0, -1.0) ==
          doctest::Approx(-1.0).epsilon(1e-13));

    Rng rng(71);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int it = 0; it < 50; ++it) {
        double th = u(rng);
        ExtReal hp = harmonic_partner(th);
        CHECK(hp.a / hp.b == doctest::Approx(1.0 / th).epsilon(1e-14));
        CHECK(cross_ratio(th, hp, 1.0, -1.0) == doctest::Approx(-1.0).epsilon(1e-12));

        // Moebius invariance
        double a = u(rng), b = u(rng), c = u(rng), d = -u(rng);
        auto moeb = [&](const ExtReal& x) {
            return ExtReal::projective(a * x.a + b * x.b, c * x.a + d * x.b);
        };
        ExtReal p1 = u(rng), p2 = u(rng), p3 = u(rng), p4 = u(rng);
        double base;
        try {
            base = cross_ratio(p1, p2, p3, p4);
        } catch (const DegenerateRange&) {
            continue;
        }
        CHECK(cross_ratio(moeb(p1), moeb(p2), moeb(p3), moeb(p4)) ==
              doctest::Approx(base).epsilon(1e-11));
    }

    CHECK_THROWS_AS(cross_ratio(1.0, 1.0, 2.0, 3.0), DegenerateRange);
    CHECK_THROWS_AS(cross_ratio(ExtReal::infinity(), ExtReal::infinity(), 2.0, 3.0),
                    DegenerateRange);
}

TEST_CASE("harmonic partner fixed points and swaps") {
    ExtReal z = harmonic_partner(ExtReal::infinity());
    CHECK(z.a == 0.0);
    ExtReal inf = harmonic_partner(0.0);
    CHECK(inf.b == 0.0);
}
