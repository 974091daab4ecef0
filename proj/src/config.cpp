#include "reslab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace reslab {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& scope,
                const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError("config: '" + scope + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" +
                              (scope.empty() ? it.key() : scope + "." + it.key()) + "'");
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: parse failure: ") + e.what());
    }
    RunConfig c;
    check_keys(j, "",
               {"potential", "classify", "distortion", "fill", "sweep", "geodesics",
                "dynamics", "seed", "output_dir", "threads"});

    if (j.contains("potential")) {
        const auto& p = j["potential"];
        check_keys(p, "potential", {"name", "barrier_scale"});
        get_if(p, "name", c.potential_name);
        get_if(p, "barrier_scale", c.barrier_scale);
    }
    if (j.contains("classify")) {
        const auto& p = j["classify"];
        check_keys(p, "classify", {"resolution", "box_radius"});
        get_if(p, "resolution", c.classify_resolution);
        get_if(p, "box_radius", c.classify_box_radius);
    }
    if (j.contains("distortion")) {
        const auto& p = j["distortion"];
        check_keys(p, "distortion", {"theta", "r0", "r1"});
        get_if(p, "theta", c.sweep.theta);
        get_if(p, "r0", c.sweep.r0);
        get_if(p, "r1", c.sweep.r1);
    }
    if (j.contains("fill")) {
        const auto& p = j["fill"];
        check_keys(p, "fill", {"level", "width"});
        get_if(p, "level", c.sweep.fill.fill_level);
        get_if(p, "width", c.sweep.fill.transition_width);
    }
    if (j.contains("sweep")) {
        const auto& p = j["sweep"];
        check_keys(p, "sweep",
                   {"h_values", "window", "eps_band", "slope_bound", "box_radius",
                    "points_per_wavelength", "n_floor", "n_cap", "n_override",
                    "shooting", "omega_radius", "eigs_count", "width_floor_stop"});
        if (p.contains("h_values"))
            c.sweep.h_values = p.at("h_values").get<std::vector<double>>();
        if (p.contains("window")) {
            auto w = p.at("window").get<std::vector<double>>();
            if (w.size() != 2) throw ConfigError("config: sweep.window needs two values");
            c.sweep.window_lo = w[0];
            c.sweep.window_hi = w[1];
        }
        get_if(p, "eps_band", c.sweep.eps_band);
        get_if(p, "slope_bound", c.sweep.slope_bound);
        get_if(p, "box_radius", c.sweep.op_box_radius);
        get_if(p, "points_per_wavelength", c.sweep.points_per_wavelength);
        get_if(p, "n_floor", c.sweep.n_floor);
        get_if(p, "n_cap", c.sweep.n_cap);
        get_if(p, "n_override", c.sweep.n_override);
        get_if(p, "shooting", c.sweep.do_shooting);
        get_if(p, "omega_radius", c.sweep.omega_radius);
        get_if(p, "eigs_count", c.sweep.eigs_count);
        get_if(p, "width_floor_stop", c.sweep.width_floor_stop);
    }
    if (j.contains("geodesics")) {
        const auto& p = j["geodesics"];
        check_keys(p, "geodesics", {"tol"});
        get_if(p, "tol", c.geodesic_tol);
    }
    if (j.contains("dynamics")) {
        const auto& p = j["dynamics"];
        check_keys(p, "dynamics",
                   {"samples", "t_max", "r_escape", "dt", "flow_dt", "coverage"});
        get_if(p, "samples", c.dyn_samples);
        get_if(p, "t_max", c.dyn_t_max);
        get_if(p, "r_escape", c.dyn_r_escape);
        get_if(p, "dt", c.dyn_dt);
        get_if(p, "flow_dt", c.flow_dt);
        if (p.contains("coverage")) {
            const auto& q = p["coverage"];
            check_keys(q, "dynamics.coverage",
                       {"r_w", "t_max", "dt", "cells_x", "cells_xi", "seeds_per_point",
                        "box_radius", "p_tol", "x_margin", "threshold"});
            get_if(q, "r_w", c.coverage.r_w);
            get_if(q, "t_max", c.coverage.T_max);
            get_if(q, "dt", c.coverage.dt);
            get_if(q, "cells_x", c.coverage.cells_x);
            get_if(q, "cells_xi", c.coverage.cells_xi);
            get_if(q, "seeds_per_point", c.coverage.seeds_per_point);
            get_if(q, "box_radius", c.coverage.box_radius);
            get_if(q, "p_tol", c.coverage.p_tol);
            get_if(q, "x_margin", c.coverage.x_margin);
            get_if(q, "threshold", c.coverage_threshold);
        }
    }
    get_if(j, "seed", c.seed);
    get_if(j, "output_dir", c.output_dir);
    get_if(j, "threads", c.threads);
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void RunConfig::resolve(const PotentialSpec& spec) {
    const bool one_d = spec.dim == 1;
    if (classify_resolution == 0) classify_resolution = one_d ? 4096 : 512;
    if (sweep.h_values.empty()) {
        sweep.h_values = one_d ? std::vector<double>{0.5, 0.4, 0.32, 0.26, 0.2, 0.16}
                               : std::vector<double>{0.20, 0.18, 0.17, 0.16, 0.15};
    }
    if (sweep.n_floor == 64 && one_d) sweep.n_floor = 32768;
    if (!one_d) {
        if (sweep.op_box_radius == 8.0) sweep.op_box_radius = 6.0;
        if (sweep.r0 == 3.0 && sweep.r1 == 5.0) {
            sweep.r0 = 2.5;
            sweep.r1 = 4.5;
        }
        if (sweep.points_per_wavelength == 24) sweep.points_per_wavelength = 14;
        if (sweep.n_cap == (1 << 16)) sweep.n_cap = 416;
        sweep.do_shooting = false;
    }
    if (dyn_r_escape == 0.0) dyn_r_escape = 2.0 * spec.far_radius;
    coverage.rng_seed = seed;
}

std::string RunConfig::reference_json(const PotentialSpec& spec) const {
    RunConfig c = *this;
    c.resolve(spec);
    nlohmann::ordered_json j;
    j["potential"] = {{"name", c.potential_name}, {"barrier_scale", c.barrier_scale}};
    j["classify"] = {{"resolution", c.classify_resolution},
                     {"box_radius", c.classify_box_radius}};
    j["distortion"] = {{"theta", c.sweep.theta}, {"r0", c.sweep.r0}, {"r1", c.sweep.r1}};
    j["fill"] = {{"level", c.sweep.fill.fill_level},
                 {"width", c.sweep.fill.transition_width}};
    j["sweep"] = {{"h_values", c.sweep.h_values},
                  {"window", {c.sweep.window_lo, c.sweep.window_hi}},
                  {"eps_band", c.sweep.eps_band},
                  {"slope_bound", c.sweep.slope_bound},
                  {"box_radius", c.sweep.op_box_radius},
                  {"points_per_wavelength", c.sweep.points_per_wavelength},
                  {"n_floor", c.sweep.n_floor},
                  {"n_cap", c.sweep.n_cap},
                  {"n_override", c.sweep.n_override},
                  {"shooting", c.sweep.do_shooting},
                  {"omega_radius", c.sweep.omega_radius},
                  {"eigs_count", c.sweep.eigs_count},
                  {"width_floor_stop", c.sweep.width_floor_stop}};
    j["geodesics"] = {{"tol", c.geodesic_tol}};
    j["dynamics"] = {{"samples", c.dyn_samples},
                     {"t_max", c.dyn_t_max},
                     {"r_escape", c.dyn_r_escape},
                     {"dt", c.dyn_dt},
                     {"flow_dt", c.flow_dt},
                     {"coverage",
                      {{"r_w", c.coverage.r_w},
                       {"t_max", c.coverage.T_max},
                       {"dt", c.coverage.dt},
                       {"cells_x", c.coverage.cells_x},
                       {"cells_xi", c.coverage.cells_xi},
                       {"seeds_per_point", c.coverage.seeds_per_point},
                       {"box_radius", c.coverage.box_radius},
                       {"p_tol", c.coverage.p_tol},
                       {"x_margin", c.coverage.x_margin},
                       {"threshold", c.coverage_threshold}}}};
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
    return j.dump(2) + "\n";
}

}  // namespace reslab
