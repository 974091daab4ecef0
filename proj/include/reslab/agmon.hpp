#ifndef RESLAB_AGMON_HPP
#define RESLAB_AGMON_HPP

#include <array>
#include <vector>

#include "reslab/sublevel.hpp"

namespace reslab {

/// Agmon distance field d(x) = d_V(U, x) for the degenerate metric
/// max(V,0) dx^2, computed by first-order upwind fast marching. d = 0 on the
/// well; the sea has speed 0, so d is constant across each sea component
/// after first contact.
struct AgmonField {
    ClassifyGrid grid;
    std::vector<double> d;
    std::vector<std::uint8_t> frozen;
    std::vector<std::int64_t> accept_order;  // -1 for seeds, else pop sequence
    /// Barrier-only variant of d: paths may not shortcut through the
    /// zero-cost sea (infinite there). Along dM the sea route equalizes d to
    /// S0 everywhere, so d_direct is what distinguishes the minimal passes;
    /// its descent curves are the geodesics meeting each boundary once.
    std::vector<double> d_direct;
    double S0 = 0.0;
    /// dM boundary points achieving d_direct <= S0 (1 + 1e-6): first contact.
    std::vector<std::array<double, 2>> first_contact;

    /// Bilinear (linear in 1D) interpolation of d at a point.
    double interpolate(const double* x) const;
    double interpolate_direct(const double* x) const;
};

struct Geodesic {
    std::vector<std::array<double, 2>> points;  // from dM down to dU
    double action = 0.0;                        // line integral of sqrt(V+)
    std::array<double, 2> sea_touch{};          // on dM (in T1)
    std::array<double, 2> well_touch{};         // on dU
};

struct GeodesicSet {
    std::vector<Geodesic> geodesics;
    std::vector<std::array<double, 2>> t1;       // sea touch points
    std::vector<std::array<double, 2>> u_touch;  // well touch points
    bool finite_count = false;  // cluster count stable under halving radius
};

/// Fast marching for |grad d| = sqrt(max(V,0)) with the well frozen at 0.
AgmonField solve_eikonal(const SublevelDecomposition& decomp,
                         const PotentialSpec& spec);

/// S0 = min over dM of d, evaluated at the subcell boundary points with a
/// fractional-cell action correction.
double agmon_distance(const AgmonField& field, const SublevelDecomposition& decomp,
                      const PotentialSpec& spec);

/// Backtracks minimal geodesics from every dM point with d <= S0 (1 + tol)
/// by descent on d, clusters them by sea-touch proximity (radius 4 cells),
/// and reports one representative per cluster.
GeodesicSet extract_geodesics(const AgmonField& field,
                              const SublevelDecomposition& decomp,
                              const PotentialSpec& spec, double tol = 0.02);

/// Independent quadrature reference for S0 along a coordinate axis
/// (1D potentials and radial 2D: the axis section realizes the minimum;
/// for other potentials this is only an upper bound on S0).
/// Integrates sqrt(max(V,0)) over the barrier segment on the positive axis
/// with adaptive Simpson to abs tolerance `tol`.
double axis_action_oracle(const PotentialSpec& spec, int axis = 0,
                          double energy = 0.0, double tol = 1e-8);

}  // namespace reslab

#endif
