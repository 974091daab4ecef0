#include "reslab/dynamics.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace reslab {

double symbol(const PotentialSpec& spec, const PhasePoint& z) {
    double xi2 = z.xi[0] * z.xi[0] + (spec.dim == 2 ? z.xi[1] * z.xi[1] : 0.0);
    return xi2 + spec.value(z.x.data());
}

Trajectory flow(const PotentialSpec& spec, const PhasePoint& z0, double T,
                const FlowOptions& opt) {
    Trajectory tr;
    tr.initial = z0;
    const int dim = spec.dim;
    const double dt = (T >= 0.0 ? opt.dt : -opt.dt);
    const std::int64_t nsteps = static_cast<std::int64_t>(std::ceil(std::abs(T) / opt.dt));
    const std::int64_t out_every =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::round(opt.dt_out / opt.dt)));

    double x[2] = {z0.x[0], z0.x[1]};
    double xi[2] = {z0.xi[0], z0.xi[1]};
    double g[2] = {0.0, 0.0};
    const double p0 = symbol(spec, z0);

    auto record = [&](double t) {
        if (!opt.record_samples) return;
        tr.times.push_back(t);
        tr.samples.push_back(PhasePoint{{x[0], x[1]}, {xi[0], xi[1]}});
    };
    record(0.0);

    spec.gradient(x, g);
    for (std::int64_t s = 0; s < nsteps; ++s) {
        // kick-drift-kick; gradient at the new position is reused next step
        for (int k = 0; k < dim; ++k) xi[k] -= 0.5 * dt * g[k];
        for (int k = 0; k < dim; ++k) x[k] += 2.0 * dt * xi[k];
        spec.gradient(x, g);
        for (int k = 0; k < dim; ++k) xi[k] -= 0.5 * dt * g[k];

        if (!std::isfinite(x[0]) || !std::isfinite(xi[0]) ||
            (dim == 2 && (!std::isfinite(x[1]) || !std::isfinite(xi[1]))))
            throw std::runtime_error("flow: non-finite state encountered");

        double t = static_cast<double>(s + 1) * dt;
        PhasePoint znow{{x[0], x[1]}, {xi[0], xi[1]}};
        tr.energy_drift = std::max(tr.energy_drift, std::abs(symbol(spec, znow) - p0));
        double r = std::hypot(x[0], dim == 2 ? x[1] : 0.0);
        if (!tr.escaped && r > opt.r_escape) {
            tr.escaped = true;
            tr.escape_time = t;
            if (opt.stop_on_escape) {
                record(t);
                return tr;
            }
        }
        if ((s + 1) % out_every == 0 || s + 1 == nsteps) record(t);
    }
    return tr;
}

NonTrappingResult non_trapping_check(const PotentialSpec& spec,
                                     const SublevelDecomposition& decomp,
                                     int sample_count, double T_max,
                                     double r_escape, std::uint64_t rng_seed,
                                     double dt) {
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int dim = spec.dim;

    // candidate sea cells
    std::vector<std::size_t> sea_cells;
    for (std::size_t i = 0; i < decomp.labels.size(); ++i)
        if (decomp.labels[i] == CellLabel::Sea) sea_cells.push_back(i);
    if (sea_cells.empty()) throw std::runtime_error("non_trapping_check: no sea cells");

    std::vector<PhasePoint> seeds;
    // xi = 0 on dM (turning points of the zero energy shell)
    for (const auto& p : decomp.sea_boundary) {
        PhasePoint z;
        z.x = {p[0], dim == 2 ? p[1] : 0.0};
        seeds.push_back(z);
        if (static_cast<int>(seeds.size()) >= sample_count / 4) break;
    }
    while (static_cast<int>(seeds.size()) < sample_count) {
        std::size_t ci = sea_cells[static_cast<std::size_t>(unif(rng) * sea_cells.size()) %
                                   sea_cells.size()];
        double x[2] = {0, 0};
        decomp.grid.center(ci, x);
        double v = spec.value(x);
        if (v > -1e-12) continue;
        double sp = std::sqrt(-v);
        PhasePoint z;
        z.x = {x[0], dim == 2 ? x[1] : 0.0};
        if (dim == 1) {
            z.xi = {unif(rng) < 0.5 ? sp : -sp, 0.0};
        } else {
            double ang = 2.0 * M_PI * unif(rng);
            z.xi = {sp * std::cos(ang), sp * std::sin(ang)};
        }
        seeds.push_back(z);
    }

    NonTrappingResult res;
    res.sampled = static_cast<int>(seeds.size());
    FlowOptions opt;
    opt.dt = dt;
    opt.r_escape = r_escape;
    opt.stop_on_escape = true;
    opt.record_samples = false;
    double worst_time = -1.0;
    bool worst_is_trapped = false;
    for (const auto& z : seeds) {
        for (double dir : {1.0, -1.0}) {
            Trajectory tr = flow(spec, z, dir * T_max, opt);
            if (tr.escaped) {
                ++res.escaped_count;
                if (!worst_is_trapped && tr.escape_time.value() > worst_time) {
                    worst_time = tr.escape_time.value();
                    FlowOptions rec = opt;
                    rec.record_samples = true;
                    res.worst = flow(spec, z, dir * std::min(T_max, *tr.escape_time + 1.0), rec);
                }
            } else if (!worst_is_trapped) {
                worst_is_trapped = true;
                FlowOptions rec = opt;
                rec.record_samples = true;
                rec.stop_on_escape = false;
                res.worst = flow(spec, z, dir * std::min(T_max, 50.0), rec);
            }
        }
    }
    res.pass = (res.escaped_count == 2 * res.sampled);
    return res;
}

namespace {

// Deterministic nested ball sampling: unit-ball points scaled by a dyadic
// radius ladder, so that seeds(2r) contains {2r p_i} plus seeds(r).
std::vector<std::array<double, 4>> unit_ball_points(int count, int dim4,
                                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 4>> pts;
    while (static_cast<int>(pts.size()) < count) {
        std::array<double, 4> p{0, 0, 0, 0};
        double r2 = 0.0;
        for (int k = 0; k < dim4; ++k) {
            p[k] = u(rng);
            r2 += p[k] * p[k];
        }
        if (r2 <= 1.0) pts.push_back(p);
    }
    return pts;
}

}  // namespace

CoverageReport nd_coverage_check(const PotentialSpec& spec,
                                 const SublevelDecomposition& decomp,
                                 const std::vector<std::array<double, 2>>& u_touch,
                                 const CoverageOptions& opt) {
    if (u_touch.empty())
        throw std::runtime_error("nd_coverage_check: empty seed set (no dU touch points)");

    CoverageReport rep;
    rep.dim = spec.dim;
    rep.r_w = opt.r_w;
    rep.tube_p_tol = opt.p_tol;
    rep.tube_x_margin = opt.x_margin;

    if (spec.dim == 1) {
        // Remark 4.3: automatic in one dimension.
        rep.tube_cells = 1;
        rep.visited_cells = 1;
        rep.fraction = 1.0;
        return rep;
    }

    // Tube cells: |p(center)| <= p_tol and x within x_margin of the well.
    const int nx = opt.cells_x, nxi = opt.cells_xi;
    const double bx = opt.box_radius;
    double vmax = 0.0;
    for (std::size_t i = 0; i < decomp.labels.size(); ++i) {
        double c[2];
        decomp.grid.center(i, c);
        vmax = std::max(vmax, spec.value(c));
    }
    const double xi_max = std::sqrt(spec.level + std::max(vmax, 0.0)) + 0.3;
    const double dxc = 2.0 * bx / nx, dxic = 2.0 * xi_max / nxi;

    auto in_tube = [&](int i, int j, int k, int l) {
        double x[2] = {-bx + (i + 0.5) * dxc, -bx + (j + 0.5) * dxc};
        double xi[2] = {-xi_max + (k + 0.5) * dxic, -xi_max + (l + 0.5) * dxic};
        double p = xi[0] * xi[0] + xi[1] * xi[1] + spec.value(x);
        if (std::abs(p) > opt.p_tol) return false;
        // x within margin of the well
        if (decomp.label_at(x) == CellLabel::Well) return true;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : decomp.well_boundary)
            best = std::min(best, std::hypot(x[0] - q[0], x[1] - q[1]));
        return best <= opt.x_margin;
    };

    const std::size_t total = static_cast<std::size_t>(nx) * nx * nxi * nxi;
    std::vector<std::int8_t> tube(total, 0);
    std::vector<float> first_visit;
    std::size_t tube_count = 0;
    std::vector<std::int32_t> tube_index(total, -1);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nx; ++j)
            for (int k = 0; k < nxi; ++k)
                for (int l = 0; l < nxi; ++l) {
                    std::size_t idx = ((static_cast<std::size_t>(i) * nx + j) * nxi + k) * nxi + l;
                    if (in_tube(i, j, k, l)) {
                        tube[idx] = 1;
                        tube_index[idx] = static_cast<std::int32_t>(tube_count++);
                    }
                }
    rep.tube_cells = tube_count;
    first_visit.assign(tube_count, -1.0f);

    auto cell_of = [&](const double* x, const double* xi) -> std::int64_t {
        int i = static_cast<int>(std::floor((x[0] + bx) / dxc));
        int j = static_cast<int>(std::floor((x[1] + bx) / dxc));
        int k = static_cast<int>(std::floor((xi[0] + xi_max) / dxic));
        int l = static_cast<int>(std::floor((xi[1] + xi_max) / dxic));
        if (i < 0 || i >= nx || j < 0 || j >= nx || k < 0 || k >= nxi || l < 0 || l >= nxi)
            return -1;
        return static_cast<std::int64_t>(((static_cast<std::size_t>(i) * nx + j) * nxi + k) * nxi + l);
    };

    // Dyadic radius ladder down to a fixed floor, so the seed set for a
    // doubled r_w strictly contains the original one (coverage is then
    // monotone in r_w by construction).
    std::vector<double> radii;
    for (double r = opt.r_w; r >= 0.045; r *= 0.5) radii.push_back(r);
    if (radii.empty()) radii.push_back(opt.r_w);
    auto base = unit_ball_points(opt.seeds_per_point, 4, opt.rng_seed);

    std::size_t visited = 0;
    auto mark = [&](const double* x, const double* xi, double t) {
        std::int64_t idx = cell_of(x, xi);
        if (idx < 0 || !tube[idx]) return;
        std::int32_t ti = tube_index[idx];
        if (first_visit[ti] < 0.0f) {
            first_visit[ti] = static_cast<float>(t);
            ++visited;
        }
    };

    const std::int64_t nsteps = static_cast<std::int64_t>(std::ceil(opt.T_max / opt.dt));
    for (const auto& c : u_touch) {
        for (double radius : radii) {
            for (const auto& b : base) {
                PhasePoint z;
                z.x = {c[0] + radius * b[0], c[1] + radius * b[1]};
                z.xi = {radius * b[2], radius * b[3]};
                for (double dir : {1.0, -1.0}) {
                    double x[2] = {z.x[0], z.x[1]}, xi[2] = {z.xi[0], z.xi[1]};
                    double g[2];
                    mark(x, xi, 0.0);
                    spec.gradient(x, g);
                    const double dt = dir * opt.dt;
                    for (std::int64_t s = 0; s < nsteps; ++s) {
                        xi[0] -= 0.5 * dt * g[0];
                        xi[1] -= 0.5 * dt * g[1];
                        x[0] += 2.0 * dt * xi[0];
                        x[1] += 2.0 * dt * xi[1];
                        spec.gradient(x, g);
                        xi[0] -= 0.5 * dt * g[0];
                        xi[1] -= 0.5 * dt * g[1];
                        mark(x, xi, std::abs(dt) * static_cast<double>(s + 1));
                        if (std::hypot(x[0], x[1]) > 2.0 * bx + 4.0) break;  // left for good
                    }
                }
            }
        }
    }
    rep.visited_cells = visited;
    rep.fraction = tube_count ? static_cast<double>(visited) / tube_count : 0.0;
    return rep;
}

std::vector<std::array<double, 2>> flow_out_set(
    const PotentialSpec& spec, const std::vector<std::array<double, 2>>& t1,
    double T_max, double dt, double sample_dt) {
    if (t1.empty()) throw std::runtime_error("flow_out_set: empty T1");
    std::vector<std::array<double, 2>> out;
    FlowOptions opt;
    opt.dt = dt;
    opt.dt_out = sample_dt;
    opt.r_escape = 1e30;
    for (const auto& p : t1) {
        PhasePoint z;
        z.x = {p[0], spec.dim == 2 ? p[1] : 0.0};
        if (T_max <= 0.0) {
            out.push_back({z.x[0], z.x[1]});
            continue;
        }
        for (double dir : {1.0, -1.0}) {
            Trajectory tr = flow(spec, z, dir * T_max, opt);
            for (const auto& s : tr.samples) out.push_back({s.x[0], s.x[1]});
        }
    }
    return out;
}

}  // namespace reslab
