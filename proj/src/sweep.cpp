#include "reslab/sweep.hpp"

#include <cmath>

namespace reslab {

PairingOutcome pair_resonance(const TildeSpectrum& tilde,
                              const ResonanceSelection& resonances) {
    PairingOutcome out;
    if (!tilde.gap_ok) return out;
    for (const auto& r : resonances.accepted) {
        if (std::abs(r.rho - tilde.selected) < tilde.gap) {
            ++out.candidate_count;
            out.resonance = r;
        }
    }
    if (out.candidate_count == 1)
        out.status = PairingOutcome::Status::Paired;
    else if (out.candidate_count > 1)
        out.status = PairingOutcome::Status::Multiple;
    return out;
}

std::pair<bool, bool> sandwich_check(double stat, double S0, double eps_band) {
    return {stat <= -2.0 * S0 + eps_band, stat >= -2.0 * S0 - eps_band};
}

namespace {

std::vector<Complex> values_of(const std::vector<EigenPair>& pairs) {
    std::vector<Complex> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(p.value);
    return v;
}

struct LineFit {
    bool ok = false;
    double slope = 0.0, intercept = 0.0;
};

LineFit least_squares(const std::vector<std::pair<double, double>>& pts) {
    LineFit f;
    if (pts.size() < 3) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-14) return f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    f.ok = true;
    return f;
}

}  // namespace

WidthLawReport run_sweep(const HSweepPlan& plan, const PotentialSpec& spec,
                         const SublevelDecomposition& decomp,
                         const AgmonField& agmon) {
    for (std::size_t i = 1; i < plan.h_values.size(); ++i)
        if (plan.h_values[i] >= plan.h_values[i - 1])
            throw std::invalid_argument("run_sweep: h values must be strictly decreasing");

    WidthLawReport rep;
    rep.S0 = agmon.S0;
    rep.S0_oracle = axis_action_oracle(spec, 0);
    if (spec.dim == 2) {
        try {
            rep.S0_oracle = std::min(rep.S0_oracle, axis_action_oracle(spec, 1));
        } catch (const std::exception&) {
            // no barrier crossing along the second axis; keep axis 0
        }
    }
    const double S0 = rep.S0_oracle;

    for (double h : plan.h_values) {
        if (std::exp(-2.0 * S0 / h) < plan.width_floor_stop) {
            rep.skipped.emplace_back(h, "predicted width below the double-precision floor");
            continue;
        }
        int n = plan.n_override > 0
                    ? plan.n_override
                    : grid_points_for(h, plan.op_box_radius, spec.level,
                                      plan.points_per_wavelength, plan.n_floor,
                                      plan.n_cap);
        Grid grid{spec.dim, n, plan.op_box_radius};
        DistortionProfile prof{plan.theta, plan.r0, plan.r1};

        SweepRow row;
        row.h = h;
        row.grid_n = n;
        try {
            auto filled = assemble_filled(spec, grid, h, plan.fill, decomp);
            TildeSpectrum tilde = tilde_spectrum(filled, h, plan.window_lo, plan.window_hi);
            row.energy = tilde.selected;
            row.gap = tilde.gap;
            row.gap_ok = tilde.gap_ok;
            if (!tilde.gap_ok) {
                rep.skipped.emplace_back(h, "gap condition failed (a(h) below floor)");
                continue;
            }

            const Complex target(tilde.selected, 0.0);
            auto base = eigs_near(assemble_distorted(spec, grid, h, prof), target,
                                  plan.eigs_count);

            DistortionProfile prof_t = prof;
            prof_t.theta = 1.2 * plan.theta;
            auto run_t = values_of(eigs_near(assemble_distorted(spec, grid, h, prof_t),
                                             target, plan.eigs_count));

            Grid grid2{spec.dim, 2 * n, plan.op_box_radius};
            auto run_g = values_of(eigs_near(assemble_distorted(spec, grid2, h, prof),
                                             target, plan.eigs_count));

            Grid gridb{spec.dim,
                       static_cast<int>(std::lround(
                           n * (plan.op_box_radius + 2.0) / plan.op_box_radius)),
                       plan.op_box_radius + 2.0};
            auto run_b = values_of(eigs_near(assemble_distorted(spec, gridb, h, prof),
                                             target, plan.eigs_count));

            SelectionParams sp;
            sp.level = spec.level;
            sp.theta = plan.theta;
            sp.window_lo = plan.window_lo;
            sp.window_hi = plan.window_hi;
            sp.h = h;
            sp.grid_dx = grid.dx();
            auto sel = select_resonances(base, run_t, run_g, run_b, sp);

            auto pairing = pair_resonance(tilde, sel);
            if (pairing.status == PairingOutcome::Status::NoCandidate) {
                rep.skipped.emplace_back(h, "no stable resonance within a(h) of E(h)");
                continue;
            }
            if (pairing.status == PairingOutcome::Status::Multiple) {
                rep.skipped.emplace_back(
                    h, "anomaly: multiple resonances in the gap window");
                continue;
            }

            const Resonance& res = pairing.resonance;
            row.rho = res.rho;
            row.width = std::abs(res.rho.imag());
            row.stat = h * std::log(row.width);
            row.pairing_dist = std::abs(res.rho - tilde.selected);
            row.residual = res.residual;
            row.drift = res.drift;

            if (plan.do_shooting && spec.dim == 1) {
                ShootingOptions so;
                so.r_out = plan.op_box_radius;
                auto sh = shooting_resonance_1d(spec, h, res.rho, so);
                row.has_shooting = true;
                row.rho_shoot = sh.rho;
                auto gi = green_identity_check(sh.xs, sh.u, sh.du, h, sh.rho,
                                               plan.omega_radius);
                row.green_residual = gi.residual;
            }

            row.action_at_energy = axis_action_oracle(spec, 0, row.energy);
            if (spec.dim == 2) {
                try {
                    row.action_at_energy = std::min(
                        row.action_at_energy, axis_action_oracle(spec, 1, row.energy));
                } catch (const std::exception&) {
                }
            }
            row.corrected_stat = row.stat + 2.0 * (row.action_at_energy - S0);
            auto [up, lo] = sandwich_check(row.stat, S0, plan.eps_band);
            row.sandwich_upper = up;
            row.sandwich_lower = lo;
            rep.rows.push_back(row);
        } catch (const std::exception& e) {
            rep.skipped.emplace_back(h, e.what());
        }
    }

    // monotonicity of the width along the sweep
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].width >= rep.rows[i - 1].width) rep.widths_monotone = false;

    rep.all_sandwich = !rep.rows.empty();
    for (const auto& r : rep.rows)
        rep.all_sandwich = rep.all_sandwich && r.sandwich_upper && r.sandwich_lower;

    // least squares over rows safely above the eigen-residual floor
    std::vector<std::pair<double, double>> pts, pts_corr;
    for (const auto& r : rep.rows) {
        if (r.width <= 1e2 * std::max(r.residual, 1e-300)) continue;
        pts.emplace_back(1.0 / r.h, std::log(r.width));
        pts_corr.emplace_back(1.0 / r.h, std::log(r.width) +
                                             2.0 * (r.action_at_energy - S0) / r.h);
    }
    LineFit f = least_squares(pts);
    if (f.ok) {
        rep.fit_ok = true;
        rep.slope = f.slope;
        rep.intercept = f.intercept;
        rep.slope_error = std::abs(f.slope + 2.0 * S0) / (2.0 * S0);
    }
    LineFit fc = least_squares(pts_corr);
    if (fc.ok) {
        rep.fit_corrected_ok = true;
        rep.corrected_slope = fc.slope;
        rep.corrected_intercept = fc.intercept;
        rep.corrected_slope_error = std::abs(fc.slope + 2.0 * S0) / (2.0 * S0);
    }
    return rep;
}

}  // namespace reslab
