#ifndef RESLAB_SPECTRAL_HPP
#define RESLAB_SPECTRAL_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "reslab/operators.hpp"

namespace reslab {

struct EigenPair {
    Complex value;
    Eigen::VectorXcd vector;
    double residual = 0.0;  // ||(A - lambda) v|| / ||v||
};

struct EigsOptions {
    int max_restarts = 50;
    double tol = 1e-9;
    int ncv = 0;       // 0: max(3k, 24)
    int dense_cutoff = 3000;
};

/// k eigenvalues of op nearest `target`, by shift-invert Arnoldi on a sparse
/// LU factorization (dense fallback for small operators). Eigenvectors are
/// returned for residual and stability checks.
std::vector<EigenPair> eigs_near(const DiscretizedOperator& op, Complex target,
                                 int k, const EigsOptions& opts = {});

struct TildeSpectrum {
    std::vector<double> in_window;  // all eigenvalues inside the window
    double selected = 0.0;          // E(h), nearest 0
    double gap = 0.0;               // a(h): half-distance to the rest of the spectrum
    bool gap_ok = false;
    Eigen::VectorXcd state;         // eigenvector of E(h)
};

/// All eigenvalues of the filled operator inside [window_lo, window_hi],
/// the selected E(h) (nearest 0) and the gap a(h). gap_ok uses the
/// polynomial floor a(h) >= h^3/10.
/// Throws when the window holds no eigenvalue.
TildeSpectrum tilde_spectrum(const DiscretizedOperator& filled, double h,
                             double window_lo, double window_hi);

struct StabilityDrift {
    double theta = -1.0;  // |d rho| under theta -> 1.2 theta
    double grid = -1.0;   //                under N -> 2N
    double box = -1.0;    //                under R_box -> R_box + 2
};

struct Resonance {
    Complex rho;
    double residual = 0.0;
    StabilityDrift drift;
};

struct ResonanceSelection {
    std::vector<Resonance> accepted;
    /// Rejected eigenvalues with their theta-drift (continuum points rotate
    /// with theta and show drifts far above the tolerance).
    std::vector<std::pair<Complex, double>> rejected;
    double stab_tol = 0.0;
    double grid_tol = 0.0;
};

struct SelectionParams {
    double level = 1.0;  // L: sector is measured from -L
    double theta = 0.3;
    double window_lo = -0.2;
    double window_hi = 0.2;
    double h = 0.3;
    /// absolute-relative hybrid: stab_tol = 1e-6 * max(|rho + L|, h^2)
    double stab_tol_scale = 1e-6;
    /// The N->2N drift is dominated by the second-order stencil error, which
    /// is far above stab_tol at practical 2D resolutions; it is checked
    /// against max(stab_tol, grid_tol_scale * (k dx)^2) with k the sea
    /// momentum at the resonance. Set grid_tol_scale = 0 to enforce stab_tol.
    double grid_tol_scale = 1.0;
    double grid_dx = 0.0;  // dx of the baseline grid (for the bound above)
};

/// Keeps eigenvalues inside the resonance sector that are stable across the
/// three perturbed runs (nearest-neighbor matching).
ResonanceSelection select_resonances(const std::vector<EigenPair>& base,
                                     const std::vector<Complex>& run_theta,
                                     const std::vector<Complex>& run_grid,
                                     const std::vector<Complex>& run_box,
                                     const SelectionParams& params);

// ---- 1D shooting oracle ------------------------------------------------

struct ShootingResult {
    Complex rho;
    std::vector<double> xs;
    std::vector<Complex> u;
    std::vector<Complex> du;  // derivative values
    int iterations = 0;
    double wronskian_rel = 0.0;
};

struct ShootingOptions {
    double r_out = 8.0;
    double x_match = 0.0;
    int n_points = 32769;  // odd: includes the matching point exactly
    double tol = 1e-12;
    int max_iter = 80;
};

/// Outgoing-boundary-condition resonance eigenproblem: integrates
/// -h^2 u'' + (V - rho) u = 0 inward from +-r_out with u ~ exp(i k |x| / h),
/// k = sqrt(rho + L) (principal branch, continued from above), and refines
/// rho by complex secant iteration on the Wronskian mismatch at x_match.
ShootingResult shooting_resonance_1d(const PotentialSpec& spec, double h,
                                     Complex rho_guess,
                                     const ShootingOptions& opts = {});

struct GreenIdentityResult {
    double lhs = 0.0;       // Im(rho) ||u||^2 over Omega
    double rhs = 0.0;       // -h^2 Im boundary flux
    double residual = 0.0;  // |lhs - rhs| / max(|rhs|, floor)
    double scale = 0.0;
    bool rhs_below_floor = false;
};

/// Green/Stokes identity residual on Omega = [-omega_radius, omega_radius]
/// for a state u given on the grid xs with derivative du.
GreenIdentityResult green_identity_check(const std::vector<double>& xs,
                                         const std::vector<Complex>& u,
                                         const std::vector<Complex>& du,
                                         double h, Complex rho,
                                         double omega_radius);

}  // namespace reslab

#endif
