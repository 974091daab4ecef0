#ifndef RESLAB_SUBLEVEL_HPP
#define RESLAB_SUBLEVEL_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "reslab/potential.hpp"

namespace reslab {

enum class CellLabel : std::uint8_t { Well = 0, Sea = 1, Barrier = 2 };

/// Cell-centered grid over the box [-R, R]^n used for classification and the
/// Agmon solver. Cell i (per axis) has center -R + (i + 1/2) * dx.
struct ClassifyGrid {
    int dim = 1;
    double box_radius = 8.0;
    int cells_per_axis = 1024;

    double dx() const { return 2.0 * box_radius / cells_per_axis; }
    std::size_t cell_count() const {
        std::size_t n = cells_per_axis;
        return dim == 2 ? n * n : n;
    }
    std::size_t index(int i, int j = 0) const {
        return dim == 2 ? static_cast<std::size_t>(i) * cells_per_axis + j
                        : static_cast<std::size_t>(i);
    }
    void center(std::size_t idx, double* x) const {
        int n = cells_per_axis;
        if (dim == 2) {
            x[0] = -box_radius + (static_cast<double>(idx / n) + 0.5) * dx();
            x[1] = -box_radius + (static_cast<double>(idx % n) + 0.5) * dx();
        } else {
            x[0] = -box_radius + (static_cast<double>(idx) + 0.5) * dx();
        }
    }
};

struct SublevelDecomposition {
    ClassifyGrid grid;
    std::vector<CellLabel> labels;
    /// Subcell (bisection-refined) points of the two boundaries.
    std::vector<std::array<double, 2>> well_boundary;  // on dU
    std::vector<std::array<double, 2>> sea_boundary;   // on dM
    bool well_compact_connected = false;
    bool well_sea_disjoint = false;

    CellLabel label_at(const double* x) const;  // nearest-cell lookup
};

/// Labels every cell by the sign of V at its center, flood-fills connected
/// components of {V <= 0}, and refines the boundary locations by bisection
/// along grid edges that cross V = 0.
///
/// Throws AssumptionError("Assumption 1", ...) when {V <= 0} has no bounded
/// component, more than one bounded component, or a well touching the box.
SublevelDecomposition classify_sublevel(const PotentialSpec& spec,
                                        int cells_per_axis, double box_radius);

/// Euclidean distance from x to the sea (0 inside it, distance to the
/// nearest dM point otherwise). Used by the filled-well assembly.
double distance_to_sea(const SublevelDecomposition& d, const double* x);

}  // namespace reslab

#endif
