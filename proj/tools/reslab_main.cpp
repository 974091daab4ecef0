#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "reslab/config.hpp"
#include "reslab/report.hpp"

namespace fs = std::filesystem;
using namespace reslab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAssumption = 2;
constexpr int kExitInconclusive = 3;

struct Context {
    RunConfig cfg;
    PotentialSpec spec;
    fs::path out;
};

Context make_context(const std::string& config_path, const std::string& out_override,
                     long long seed_override, int threads_override) {
    Context ctx;
    if (!config_path.empty()) ctx.cfg = RunConfig::from_file(config_path);
    if (!out_override.empty()) ctx.cfg.output_dir = out_override;
    if (seed_override >= 0) ctx.cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (threads_override > 0) ctx.cfg.threads = threads_override;
    ctx.spec = make_potential(ctx.cfg.potential_name);
    if (ctx.cfg.barrier_scale != 1.0)
        ctx.spec = scale_barrier(ctx.spec, ctx.cfg.barrier_scale);
    ctx.cfg.resolve(ctx.spec);
    ctx.out = fs::path(ctx.cfg.output_dir);
    fs::create_directories(ctx.out);
    return ctx;
}

struct GeometryData {
    SublevelDecomposition decomp;
    AgmonField field;
    GeodesicSet geodesics;
    bool assumption4 = true;
};

GeometryData run_geometry(Context& ctx, bool write_files) {
    GeometryData gd{classify_sublevel(ctx.spec, ctx.cfg.classify_resolution,
                                      ctx.cfg.classify_box_radius),
                    {},
                    {},
                    true};
    gd.field = solve_eikonal(gd.decomp, ctx.spec);
    gd.geodesics = extract_geodesics(gd.field, gd.decomp, ctx.spec, ctx.cfg.geodesic_tol);
    gd.assumption4 = gd.geodesics.finite_count;
    if (write_files) {
        write_decomposition_json(gd.decomp, gd.field.S0, &gd.geodesics,
                                 (ctx.out / "decomposition.json").string());
        write_agmon_csv(gd.field, (ctx.out / "agmon.csv").string());
        write_geodesics_json(gd.geodesics, (ctx.out / "geodesics.json").string());
        nlohmann::ordered_json j;
        j["potential"] = ctx.spec.name;
        j["S0"] = gd.field.S0;
        j["S0_axis_oracle"] = axis_action_oracle(ctx.spec, 0);
        j["geodesic_count"] = gd.geodesics.geodesics.size();
        j["finite_geodesic_set"] = gd.geodesics.finite_count;
        nlohmann::ordered_json t1 = nlohmann::ordered_json::array();
        for (const auto& p : gd.geodesics.t1) t1.push_back({p[0], p[1]});
        j["t1"] = t1;
        std::ofstream(ctx.out / "geometry_summary.json") << j.dump(2) << "\n";
    }
    return gd;
}

int cmd_geometry(Context& ctx) {
    GeometryData gd = run_geometry(ctx, true);
    std::cout << "S0 = " << fmt17(gd.field.S0)
              << "  geodesics = " << gd.geodesics.geodesics.size()
              << "  finite = " << (gd.assumption4 ? "yes" : "no") << "\n";
    if (!gd.assumption4) {
        std::cerr << "assumption violation: Assumption 4 (minimal geodesic set is "
                     "not finite; continuum detected)\n";
        return kExitAssumption;
    }
    return kExitOk;
}

int cmd_dynamics(Context& ctx) {
    GeometryData gd = run_geometry(ctx, false);
    auto nt = non_trapping_check(ctx.spec, gd.decomp, ctx.cfg.dyn_samples,
                                 ctx.cfg.dyn_t_max, ctx.cfg.dyn_r_escape, ctx.cfg.seed,
                                 ctx.cfg.dyn_dt);
    write_trajectory_csv(nt.worst, (ctx.out / "worst_trajectory.csv").string());

    CoverageOptions cov = ctx.cfg.coverage;
    auto cr = nd_coverage_check(ctx.spec, gd.decomp, gd.geodesics.u_touch, cov);
    write_coverage_csv(cr, (ctx.out / "coverage.csv").string());

    auto aset = flow_out_set(ctx.spec, gd.geodesics.t1, 20.0);
    {
        std::ofstream out(ctx.out / "flow_out.csv");
        out << "x0,x1\n";
        for (const auto& p : aset) out << fmt17(p[0]) << ',' << fmt17(p[1]) << '\n';
    }

    nlohmann::ordered_json j;
    j["non_trapping_pass"] = nt.pass;
    j["sampled"] = nt.sampled;
    j["escaped"] = nt.escaped_count;
    j["coverage_fraction"] = cr.fraction;
    j["coverage_threshold"] = ctx.cfg.coverage_threshold;
    j["tube_cells"] = cr.tube_cells;
    std::ofstream(ctx.out / "dynamics_summary.json") << j.dump(2) << "\n";

    std::cout << "non-trapping: " << (nt.pass ? "pass" : "FAIL")
              << "  coverage fraction = " << fmt17(cr.fraction) << "\n";
    if (!nt.pass) {
        std::cerr << "assumption violation: Assumption 3 (trapped trajectory found; "
                     "see worst_trajectory.csv)\n";
        return kExitAssumption;
    }
    if (cr.fraction < ctx.cfg.coverage_threshold) {
        std::cerr << "assumption violation: [ND] coverage fraction "
                  << fmt17(cr.fraction) << " below threshold\n";
        return kExitAssumption;
    }
    return kExitOk;
}

int run_widthlaw(Context& ctx, bool fit_required) {
    GeometryData gd = run_geometry(ctx, true);
    WidthLawReport rep = run_sweep(ctx.cfg.sweep, ctx.spec, gd.decomp, gd.field);
    write_width_csv(rep, (ctx.out / "widthlaw.csv").string());
    write_width_json(rep, ctx.cfg.sweep.slope_bound,
                     (ctx.out / "widthlaw_summary.json").string());
    write_width_svg(rep, (ctx.out / "widthlaw.svg").string());

    std::cout << "rows = " << rep.rows.size() << "  skipped = " << rep.skipped.size()
              << "\n";
    for (const auto& [h, why] : rep.skipped)
        std::cout << "  skipped h=" << h << ": " << why << "\n";
    if (!rep.rows.empty()) {
        std::cout << "S0 = " << fmt17(rep.S0_oracle) << " (-2*S0 = "
                  << fmt17(-2.0 * rep.S0_oracle) << ")\n";
        for (const auto& r : rep.rows)
            std::cout << "  h=" << r.h << "  E=" << fmt17(r.energy)
                      << "  width=" << fmt17(r.width) << "  h*ln w=" << fmt17(r.stat)
                      << "\n";
    }
    if (!fit_required) return kExitOk;
    if (!rep.fit_ok) {
        std::cerr << "inconclusive: fewer than 3 usable rows, no fit\n";
        return kExitInconclusive;
    }
    std::cout << "slope = " << fmt17(rep.slope) << "  slope_error = "
              << fmt17(rep.slope_error) << " (bound " << ctx.cfg.sweep.slope_bound
              << ")\n";
    std::cout << "corrected slope = " << fmt17(rep.corrected_slope)
              << "  corrected_error = " << fmt17(rep.corrected_slope_error) << "\n";
    if (rep.rows.empty()) return kExitAssumption;
    if (rep.slope_error > ctx.cfg.sweep.slope_bound) {
        std::cerr << "width-law check failed: slope_error above bound\n";
        return kExitAssumption;
    }
    return kExitOk;
}

int cmd_resonances(Context& ctx) { return run_widthlaw(ctx, false); }

int cmd_widthlaw(Context& ctx) { return run_widthlaw(ctx, true); }

int cmd_report(Context& ctx) {
    int rc_geom = cmd_geometry(ctx);
    int rc_dyn = cmd_dynamics(ctx);
    int rc_w = run_widthlaw(ctx, true);
    nlohmann::ordered_json j;
    j["geometry_exit"] = rc_geom;
    j["dynamics_exit"] = rc_dyn;
    j["widthlaw_exit"] = rc_w;
    std::ofstream(ctx.out / "report_summary.json") << j.dump(2) << "\n";
    if (rc_w != kExitOk) return rc_w;
    if (rc_dyn != kExitOk) return rc_dyn;
    return rc_geom;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reslab: shape-resonance width laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed = -1;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_option("--threads", threads, "worker threads (overrides config)");

    auto* c_geom = app.add_subcommand("geometry", "classification + Agmon distance + geodesics");
    auto* c_dyn = app.add_subcommand("dynamics", "non-trapping and coverage checks");
    auto* c_res = app.add_subcommand("resonances", "per-h resonance pipeline, no fit");
    auto* c_width = app.add_subcommand("widthlaw", "full h-sweep and width-law fit");
    auto* c_rep = app.add_subcommand("report", "geometry + dynamics + widthlaw");
    auto* c_def = app.add_subcommand("defaults", "print the configuration reference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitConfig : kExitConfig;
    }

    try {
        Context ctx = make_context(config_path, out_dir, seed, threads);
        if (c_def->parsed()) {
            std::cout << ctx.cfg.reference_json(ctx.spec);
            return kExitOk;
        }
        if (c_geom->parsed()) return cmd_geometry(ctx);
        if (c_dyn->parsed()) return cmd_dynamics(ctx);
        if (c_res->parsed()) return cmd_resonances(ctx);
        if (c_width->parsed()) return cmd_widthlaw(ctx);
        if (c_rep->parsed()) return cmd_report(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const AssumptionError& e) {
        std::cerr << "assumption violation: " << e.assumption << ": " << e.what()
                  << "\n";
        return kExitAssumption;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssumption;
    }
    return kExitConfig;
}
