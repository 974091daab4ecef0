#ifndef RESLAB_OPERATORS_HPP
#define RESLAB_OPERATORS_HPP

#include <Eigen/SparseCore>
#include <complex>
#include <string>

#include "reslab/potential.hpp"
#include "reslab/sublevel.hpp"

namespace reslab {

using SparseC = Eigen::SparseMatrix<Complex>;

/// Node-centered Dirichlet grid: interior points x_i = -R + (i+1) dx,
/// i = 0..N-1, dx = 2R/(N+1); the boundary values are excluded.
struct Grid {
    int dim = 1;
    int points_per_axis = 1024;
    double box_radius = 8.0;

    double dx() const { return 2.0 * box_radius / (points_per_axis + 1); }
    std::size_t size() const {
        std::size_t n = points_per_axis;
        return dim == 2 ? n * n : n;
    }
    double coord(int i) const { return -box_radius + (i + 1) * dx(); }
};

/// Exterior distortion x -> x + i theta f(x), with f = 0 inside R0 and
/// f(x) = x outside R1, blended by a quintic sigmoid (C^2 at both ends).
/// In 2D the profile acts per axis: f_j(x) = x_j * blend(|x_j|).
struct DistortionProfile {
    double theta = 0.3;
    double r0 = 3.0;
    double r1 = 5.0;

    double blend(double s) const;    // 0 below r0, 1 above r1
    double f(double x) const;        // x * blend(|x|)
    double fprime(double x) const;   // analytic derivative
};

struct FilledWellSpec {
    double fill_level = 0.5;       // B
    double transition_width = 0.3; // delta_fill
};

enum class OperatorKind { Plain, Distorted, Filled };

struct DiscretizedOperator {
    OperatorKind kind = OperatorKind::Plain;
    SparseC matrix;
    Grid grid;
    double h = 1.0;
    bool is_real = true;
    DistortionProfile distortion;  // meaningful for Distorted
    FilledWellSpec fill;           // meaningful for Filled
};

/// P = -h^2 Laplace + V, second-order central differences, Dirichlet.
DiscretizedOperator assemble_plain(const PotentialSpec& spec, const Grid& grid,
                                   double h);

/// The distorted operator P_theta on the contour x -> x + i theta f(x),
/// discretized in the symmetrized (half-density) form so the matrix is
/// complex symmetric. Requires spec.value_c.
DiscretizedOperator assemble_distorted(const PotentialSpec& spec, const Grid& grid,
                                       double h, const DistortionProfile& profile);

/// The filled-well reference operator P-tilde = -h^2 Laplace + V-tilde,
/// V-tilde = (1-s) V + s B with s a smooth cutoff supported within
/// transition_width of the sea.
DiscretizedOperator assemble_filled(const PotentialSpec& spec, const Grid& grid,
                                    double h, const FilledWellSpec& fill,
                                    const SublevelDecomposition& decomp);

/// Points-per-wavelength grid sizing rule at the sea momentum sqrt(L)/h,
/// with a floor. Returns a per-axis point count.
int grid_points_for(double h, double box_radius, double level,
                    int points_per_wavelength = 24, int floor_points = 64,
                    int cap_points = 1 << 20);

/// Writes the matrix as "i j re im" triplet lines (0-based indices).
void export_triplets(const DiscretizedOperator& op, const std::string& path);

}  // namespace reslab

#endif
