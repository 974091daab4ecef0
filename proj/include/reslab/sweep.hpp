#ifndef RESLAB_SWEEP_HPP
#define RESLAB_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "reslab/agmon.hpp"
#include "reslab/spectral.hpp"

namespace reslab {

struct HSweepPlan {
    std::vector<double> h_values;  // strictly decreasing
    double theta = 0.3;
    double r0 = 3.0, r1 = 5.0;
    FilledWellSpec fill{0.5, 0.3};
    double window_lo = -0.2, window_hi = 0.2;
    double eps_band = 0.5;        // sandwich band
    double slope_bound = 0.10;    // acceptance bound on the fitted slope
    double op_box_radius = 8.0;
    int points_per_wavelength = 24;
    int n_floor = 64;
    int n_cap = 1 << 16;
    int n_override = 0;  // fixed per-axis N (0: apply the sizing rule)
    bool do_shooting = true;  // effective in 1D only
    double omega_radius = 2.5;
    double width_floor_stop = 1e-12;  // skip h with predicted width below this
    int eigs_count = 10;
};

struct SweepRow {
    double h = 0.0;
    int grid_n = 0;
    double energy = 0.0;   // E(h)
    double gap = 0.0;      // a(h)
    bool gap_ok = false;
    Complex rho;
    double width = 0.0;          // |Im rho|
    double stat = 0.0;           // h ln |Im rho|
    double pairing_dist = 0.0;   // |rho - E(h)|
    double residual = 0.0;       // eigenpair residual
    StabilityDrift drift;
    // 1D cross-checks
    bool has_shooting = false;
    Complex rho_shoot;
    double green_residual = -1.0;
    // energy-referenced diagnostics: the barrier action at E(h) and the
    // drift-corrected statistic h ln w + 2 (S(E) - S0)
    double action_at_energy = 0.0;
    double corrected_stat = 0.0;
    bool sandwich_upper = false;
    bool sandwich_lower = false;
};

struct WidthLawReport {
    std::vector<SweepRow> rows;
    std::vector<std::pair<double, std::string>> skipped;  // (h, reason)
    double S0 = 0.0;         // from the Agmon field
    double S0_oracle = 0.0;  // axis quadrature
    bool fit_ok = false;
    double slope = 0.0, intercept = 0.0, slope_error = 1e300;
    bool fit_corrected_ok = false;
    double corrected_slope = 0.0, corrected_intercept = 0.0,
           corrected_slope_error = 1e300;
    bool widths_monotone = true;
    bool all_sandwich = false;
};

struct PairingOutcome {
    enum class Status { Paired, NoCandidate, Multiple } status = Status::NoCandidate;
    Resonance resonance;
    int candidate_count = 0;
};

/// The bijection at one h: the unique accepted resonance within a(h) of E(h).
PairingOutcome pair_resonance(const TildeSpectrum& tilde,
                              const ResonanceSelection& resonances);

/// Per-row two-sided band: -2 S0 - eps <= h ln|Im rho| <= -2 S0 + eps.
std::pair<bool, bool> sandwich_check(double stat, double S0, double eps_band);

/// Runs the full pipeline at every h of the plan and fits
/// ln|Im rho| = m (1/h) + c over the usable rows.
WidthLawReport run_sweep(const HSweepPlan& plan, const PotentialSpec& spec,
                         const SublevelDecomposition& decomp,
                         const AgmonField& agmon);

}  // namespace reslab

#endif
