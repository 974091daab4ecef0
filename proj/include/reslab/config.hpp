#ifndef RESLAB_CONFIG_HPP
#define RESLAB_CONFIG_HPP

#include <cstdint>
#include <string>

#include "reslab/dynamics.hpp"
#include "reslab/sweep.hpp"

namespace reslab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One structured file per run; unknown keys are rejected with the offending
/// key named. Fields left at 0 (or empty) resolve to dimension-appropriate
/// defaults once the potential is known.
struct RunConfig {
    std::string potential_name = "gauss1d";
    double barrier_scale = 1.0;  // sqrt factor: 2.0 means 4V on the barrier

    int classify_resolution = 0;      // auto: 4096 (1D) / 512 (2D)
    double classify_box_radius = 8.0;

    HSweepPlan sweep;  // h_values empty = dimension default
    double geodesic_tol = 0.02;

    // dynamics
    int dyn_samples = 128;
    double dyn_t_max = 100.0;
    double dyn_r_escape = 0.0;  // auto: 2 * far_radius
    double dyn_dt = 2.5e-4;
    double flow_dt = 1e-5;
    CoverageOptions coverage;
    double coverage_threshold = 0.95;

    std::uint64_t seed = 12345;
    std::string output_dir = "out";
    int threads = 1;

    /// Parses a JSON config file. Throws ConfigError naming unknown or
    /// ill-typed keys.
    static RunConfig from_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);

    /// Fills the auto fields from the potential dimension.
    void resolve(const PotentialSpec& spec);

    /// The full default configuration (after resolve) as pretty JSON; the
    /// generated reference for every supported key.
    std::string reference_json(const PotentialSpec& spec) const;
};

}  // namespace reslab

#endif
