#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <random>

#include "dr/focal.hpp"
#include "dr/geodesic.hpp"
#include "dr/isoparametric.hpp"
#include "dr/report.hpp"

using namespace dr;

namespace {

struct RunConfig {
    std::string spec_path;
    std::uint64_t seed = 42;
    int samples = 0; // 0 = per-command default
    double tol_exact = 1e-9;
    double tol_fd = 1e-5;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, RunConfig& cfg, bool need_spec) {
    auto* s = cmd->add_option("--spec", cfg.spec_path, "space spec file (JSON)");
    if (need_spec) s->required();
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--samples", cfg.samples, "sample count")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-exact", cfg.tol_exact, "tolerance for analytic identities")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-fd", cfg.tol_fd, "tolerance for finite-difference identities")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", cfg.out, "report output path (default stdout)");
    cmd->add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
}

Space load_space(const RunConfig& cfg) {
    CliffordSpec spec = parse_spec_file(cfg.spec_path);
    try {
        return Space(build_algebra(spec));
    } catch (const Error& e) {
        throw ConfigError(std::string("spec rejected: ") + e.what());
    }
}

Report base_report(const RunConfig& cfg) {
    Report rep;
    rep.spec = cfg.spec_path;
    rep.seed = cfg.seed;
    return rep;
}

int finish(const RunConfig& cfg, const Report& rep) {
    emit_report(rep, cfg.format, cfg.out);
    return rep.all_pass() ? 0 : 1;
}

Vec gaussian(Rng& rng, int dim, double sigma = 0.5) {
    std::normal_distribution<double> g(0.0, sigma);
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = g(rng);
    return x;
}

TangentVec random_unit(Rng& rng, int n, int m) {
    TangentVec xi{gaussian(rng, n, 1.0), gaussian(rng, m, 1.0), 0.0};
    std::normal_distribution<double> g;
    xi.s = g(rng);
    double nn = xi.norm();
    xi.v /= nn;
    xi.z /= nn;
    xi.s /= nn;
    return xi;
}

int cmd_validate(const RunConfig& cfg) {
    Space S = load_space(cfg);
    Rng rng(cfg.seed);
    auto vr = validate_clifford(S.algebra(), rng, cfg.samples ? cfg.samples : 1000);
    Report rep = base_report(cfg);
    for (const auto& e : vr.entries)
        rep.results.push_back({e.name, 0.0, e.residual, e.residual, e.residual <= 1e-12});
    return finish(cfg, rep);
}

int cmd_verify_iso(const RunConfig& cfg) {
    Space S = load_space(cfg);
    Rng rng(cfg.seed);
    int ns = cfg.samples ? cfg.samples : 100;
    auto pts = sample_points(S, cfg.seed, ns);
    Report rep = base_report(cfg);

    auto push = [&](const IsoFn& fn, const std::string& label) {
        auto vrep = verify_isoparametric(S, fn, pts, cfg.seed);
        for (const auto& r : vrep.records) {
            double tol = r.identity == "laplacian" ? cfg.tol_fd : cfg.tol_exact;
            rep.results.push_back({label + " " + r.identity, 0.0, r.max_residual,
                                   r.mean_residual, r.max_residual <= tol});
        }
    };

    for (double t0 : {-2.0, -1.0, 0.0, 1.0}) {
        AffinePoint x0{gaussian(rng, S.n()), gaussian(rng, S.m()), t0};
        push(IsoFn::distorted_distance(S, x0), "distorted_distance t0=" + std::to_string(t0));
    }
    {
        Vec v = gaussian(rng, S.n(), 1.0);
        v.normalize();
        double s = 0.5;
        v *= std::sqrt(1.0 - s * s);
        Point base{gaussian(rng, S.n()), gaussian(rng, S.m()), 1.3};
        push(IsoFn::dstar(S, base, v, s), "dstar");
    }
    {
        std::vector<int> I;
        for (int i = 0; i < S.n(); i += 2) I.push_back(i);
        push(IsoFn::subset_f(S, I), "subset_f");
    }
    return finish(cfg, rep);
}

int cmd_geodesic(const RunConfig& cfg) {
    Space S = load_space(cfg);
    Rng rng(cfg.seed);
    int ng = cfg.samples ? cfg.samples : 100;
    std::uniform_real_distribution<double> tpar(-3.0, 3.0);

    double speed_res = 0.0;
    for (int i = 0; i < ng; ++i) {
        Point base{gaussian(rng, S.n()), gaussian(rng, S.m()), 1.0 + 0.5 * (i % 5)};
        ProlongedGeodesic g{base, random_unit(rng, S.n(), S.m())};
        for (int k = 0; k < 5; ++k) {
            double t1 = tpar(rng), t2 = tpar(rng);
            double d = S.distance(geodesic_point(S, g, t1), geodesic_point(S, g, t2));
            speed_res = std::max(speed_res, std::abs(d - std::abs(t1 - t2)));
        }
    }

    double conic_res = 0.0;
    for (int i = 0; i < 20; ++i) {
        TangentVec xi = random_unit(rng, S.n(), S.m());
        if (i % 3 == 1) xi = {xi.v / xi.v.norm() * 0.8, Vec::Zero(S.m()), 0.6};
        if (i % 3 == 2) xi = {Vec::Zero(S.n()), Vec::Zero(S.m()), 1.0};
        auto c = classify_conic(S.algebra(), xi);
        for (int k = 0; k < 50; ++k) {
            double th = -0.95 + 1.9 * k / 49.0;
            if (xi.z.norm() < 1e-12 && std::abs(xi.s) > 1e-12 &&
                std::abs(th - 1.0 / xi.s) < 1e-2)
                continue;
            conic_res = std::max(conic_res, c.residual(th));
        }
    }

    bool infinity_ok = true;
    for (int i = 0; i < 50; ++i) {
        TangentVec xi = random_unit(rng, S.n(), S.m());
        bool star = std::abs(xi.v.norm() - 1.0) <= 1e-12;
        if (point_at_infinity(S.algebra(), xi).has_value() == star) infinity_ok = false;
    }
    TangentVec unit_v{Vec::Unit(S.n(), 0), Vec::Zero(S.m()), 0.0};
    if (point_at_infinity(S.algebra(), unit_v).has_value()) infinity_ok = false;

    Report rep = base_report(cfg);
    rep.results.push_back({"unit_speed", 0.0, speed_res, speed_res, speed_res <= 1e-9});
    rep.results.push_back({"conic_residual", 0.0, conic_res, conic_res, conic_res <= 1e-10});
    rep.results.push_back({"point_at_infinity_case_split", 0.0, 0.0, 0.0, infinity_ok});
    return finish(cfg, rep);
}

int cmd_j2_scan(const RunConfig& cfg, int grid) {
    CliffordSpec spec = parse_spec_file(cfg.spec_path);
    Space S = load_space(cfg);
    if (spec.explicit_form())
        throw ConfigError("j2-scan requires a tag-form spec (d/d1/d2 modules)");
    Rng rng(cfg.seed);
    int mismatches = 0, satisfied = 0;
    for (int i = 0; i < grid; ++i) {
        Vec v = gaussian(rng, S.n(), 1.0);
        int mode = i % 4;
        if (mode == 1) v.tail(S.n() / 2).setZero();
        if (mode == 2) v.head(S.n() / 2).setZero();
        if (mode == 3 && S.n() % 2 == 0) v.tail(S.n() / 2) = 0.5 * v.head(S.n() / 2);
        bool pred = predict_j2_set(spec, v);
        bool got = j2_satisfied(S.algebra(), v, 1e-8, rng).satisfied;
        if (pred != got) ++mismatches;
        if (got) ++satisfied;
    }
    Report rep = base_report(cfg);
    rep.results.push_back({"j2_satisfied_count", double(satisfied), 0.0, 0.0, true});
    rep.results.push_back({"j2_unsatisfied_count", double(grid - satisfied), 0.0, 0.0, true});
    rep.results.push_back(
        {"j2_predict_mismatches", double(mismatches), 0.0, 0.0, mismatches == 0});
    return finish(cfg, rep);
}

int cmd_curvature_table(const RunConfig& cfg, int m, int n, const std::vector<double>& radii) {
    if (m < 0 || n <= 0) throw ConfigError("curvature-table: need m >= 0 and n > 0");
    Report rep = base_report(cfg);
    rep.results.push_back(
        {"horosphere", mean_curvature(HypersurfaceKind::Horosphere, 0.0, m, n), 0.0, 0.0, true});
    for (double r : radii) {
        if (r <= 0.0) throw ConfigError("curvature-table: radii must be positive");
        char name[64];
        std::snprintf(name, sizeof(name), "sphere r=%g", r);
        rep.results.push_back(
            {name, mean_curvature(HypersurfaceKind::Sphere, r, m, n), 0.0, 0.0, true});
        std::snprintf(name, sizeof(name), "tube r=%g", r);
        rep.results.push_back(
            {name, mean_curvature(HypersurfaceKind::Tube, r, m, n), 0.0, 0.0, true});
    }
    return finish(cfg, rep);
}

int cmd_focal_check(const RunConfig& cfg) {
    Space S = load_space(cfg);
    Rng rng(cfg.seed);
    Report rep = base_report(cfg);
    int ns = cfg.samples ? cfg.samples : 5;

    Fx0 F{AffinePoint{gaussian(rng, S.n()), gaussian(rng, S.m()), -1.0}};
    auto fn = IsoFn::distorted_distance(S, F.x0);
    double dres = 0.0;
    auto pts = sample_points(S, cfg.seed + 1, ns);
    for (const Point& x : pts) {
        double c = eval_D(S, F.x0, x);
        dres = std::max(dres, std::abs(distance_to_focal(S, F, x, cfg.seed) -
                                       tube_radius(fn, c)));
    }
    rep.results.push_back({"distance_vs_tube_radius", 0.0, dres, dres, dres <= 1e-6});

    auto vertex = totally_geodesic_at(S, F, F.x0.V);
    rep.results.push_back({"vertex_totally_geodesic", 0.0, vertex.residual, vertex.residual,
                           vertex.flag && vertex.residual <= 1e-8});

    bool consistent = true;
    for (int i = 0; i < 4; ++i) {
        Vec v = gaussian(rng, S.n(), 1.0);
        if (i % 2) v.tail(S.n() / 2).setZero();
        v.normalize();
        FStar Fs{v, gaussian(rng, S.n()), 0.2, 1.1};
        auto r = totally_geodesic_at(S, Fs);
        Rng jr(cfg.seed);
        bool j2 = j2_satisfied(S.algebra(), v, 1e-8, jr).satisfied;
        if (r.flag != j2) consistent = false;
        if (r.flag && r.residual > 1e-8) consistent = false;
        if (!r.flag && r.residual < 1e-3) consistent = false;
    }
    rep.results.push_back({"fstar_j2_consistency", 0.0, 0.0, 0.0, consistent});
    return finish(cfg, rep);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damek-Ricci isoparametric verification driver"};
    app.require_subcommand(1);

    RunConfig cfg;
    int grid = 500;
    int table_m = 0, table_n = 0;
    std::vector<double> radii;

    auto* validate = app.add_subcommand("validate", "Clifford relation residuals");
    add_common(validate, cfg, true);
    auto* verify = app.add_subcommand("verify-iso", "isoparametric identity residuals");
    add_common(verify, cfg, true);
    auto* geo = app.add_subcommand("geodesic", "geodesic and conic checks");
    add_common(geo, cfg, true);
    auto* j2 = app.add_subcommand("j2-scan", "J^2 condition scan vs prediction");
    add_common(j2, cfg, true);
    j2->add_option("--grid", grid, "number of scan points")->check(CLI::PositiveNumber);
    auto* curv = app.add_subcommand("curvature-table", "mean curvature closed forms");
    add_common(curv, cfg, false);
    curv->add_option("--m", table_m, "center dimension")->required();
    curv->add_option("--n", table_n, "horizontal dimension")->required();
    curv->add_option("--radii", radii, "radii list")->delimiter(',')->required();
    auto* focal = app.add_subcommand("focal-check", "focal variety checks");
    add_common(focal, cfg, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*validate) return cmd_validate(cfg);
        if (*verify) return cmd_verify_iso(cfg);
        if (*geo) return cmd_geodesic(cfg);
        if (*j2) return cmd_j2_scan(cfg, grid);
        if (*curv) return cmd_curvature_table(cfg, table_m, table_n, radii);
        if (*focal) return cmd_focal_check(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
