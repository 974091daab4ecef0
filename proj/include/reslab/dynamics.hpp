#ifndef RESLAB_DYNAMICS_HPP
#define RESLAB_DYNAMICS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "reslab/agmon.hpp"
#include "reslab/potential.hpp"
#include "reslab/sublevel.hpp"

namespace reslab {

struct PhasePoint {
    std::array<double, 2> x{0.0, 0.0};
    std::array<double, 2> xi{0.0, 0.0};
};

/// p(x,xi) = xi^2 + V(x)
double symbol(const PotentialSpec& spec, const PhasePoint& z);

struct Trajectory {
    PhasePoint initial;
    std::vector<double> times;
    std::vector<PhasePoint> samples;
    double energy_drift = 0.0;  // max_t |p(z(t)) - p(z(0))|
    bool escaped = false;
    std::optional<double> escape_time;
};

struct FlowOptions {
    double dt = 1e-5;        // default step honors the 1e-8 energy contract
    double dt_out = 0.05;    // sample spacing
    double r_escape = 6.0;
    bool stop_on_escape = false;
    bool record_samples = true;
};

/// Integrates xdot = 2 xi, xidot = -grad V with Stoermer-Verlet (leapfrog)
/// over [0, T] (T may be negative for backward flow).
Trajectory flow(const PotentialSpec& spec, const PhasePoint& z0, double T,
                const FlowOptions& opt = {});

struct NonTrappingResult {
    bool pass = false;
    int sampled = 0;
    int escaped_count = 0;
    Trajectory worst;  // non-escaping (or slowest-escaping) trajectory
};

/// Samples p^{-1}(0) over the sea (positions in sea cells and on dM, momenta
/// on the sphere xi^2 = -V, plus xi = 0 at dM) and flows each sample forward
/// and backward. Passes iff every trajectory escapes r_escape within T_max.
NonTrappingResult non_trapping_check(const PotentialSpec& spec,
                                     const SublevelDecomposition& decomp,
                                     int sample_count, double T_max,
                                     double r_escape, std::uint64_t rng_seed,
                                     double dt = 2.5e-4);

struct CoverageReport {
    int dim = 2;
    double r_w = 0.3;
    double tube_p_tol = 0.3;
    double tube_x_margin = 0.3;
    std::size_t tube_cells = 0;
    std::size_t visited_cells = 0;
    double fraction = 0.0;
    std::vector<float> first_visit;  // per tube cell, -1 if unvisited
};

struct CoverageOptions {
    double r_w = 0.3;
    double T_max = 60.0;
    double dt = 2e-3;
    int cells_x = 48;      // per x axis over [-box, box]
    int cells_xi = 32;     // per xi axis over [-xi_max, xi_max]
    int seeds_per_point = 48;
    double box_radius = 2.0;   // phase grid restricted near the well
    double p_tol = 0.3;
    double x_margin = 0.3;
    std::uint64_t rng_seed = 12345;
};

/// Remark-4.3 style coverage test: seeds balls around (x1, 0) for x1 in
/// u_touch, flows them over [-T_max, T_max], and reports the visited fraction
/// of a tubular neighborhood of Sigma_0 = {xi^2 + V = 0, x in U} in phase
/// space. In 1D the condition holds automatically and the fraction is 1.
CoverageReport nd_coverage_check(const PotentialSpec& spec,
                                 const SublevelDecomposition& decomp,
                                 const std::vector<std::array<double, 2>>& u_touch,
                                 const CoverageOptions& opt);

/// x-projections of the flow-out of T1 x {0} over [-T_max, T_max].
std::vector<std::array<double, 2>> flow_out_set(
    const PotentialSpec& spec, const std::vector<std::array<double, 2>>& t1,
    double T_max, double dt = 1e-3, double sample_dt = 0.02);

}  // namespace reslab

#endif
