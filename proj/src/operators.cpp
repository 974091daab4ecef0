#include "reslab/operators.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

namespace reslab {

double DistortionProfile::blend(double s) const {
    if (s <= r0) return 0.0;
    if (s >= r1) return 1.0;
    double t = (s - r0) / (r1 - r0);
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double DistortionProfile::f(double x) const { return x * blend(std::abs(x)); }

double DistortionProfile::fprime(double x) const {
    double s = std::abs(x);
    if (s <= r0) return 0.0;
    if (s >= r1) return 1.0;
    double t = (s - r0) / (r1 - r0);
    double q = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    double qp = 30.0 * t * t * (1.0 - 2.0 * t + t * t);
    return q + s * qp / (r1 - r0);
}

namespace {

// 1D second-difference factor matrices along one axis, as triplets acting on
// the full tensor index set.
struct AxisStencil {
    std::vector<Complex> diag;      // size N
    std::vector<Complex> off;       // size N-1, coupling i <-> i+1 (symmetric)
};

AxisStencil plain_axis(const Grid& g, double h) {
    const int n = g.points_per_axis;
    const double w = h * h / (g.dx() * g.dx());
    AxisStencil st;
    st.diag.assign(n, Complex(2.0 * w));
    st.off.assign(n - 1, Complex(-w));
    return st;
}

// Symmetrized contour stencil: the similarity transform by diag(sqrt(g))
// absorbs the half-density factor and keeps the matrix complex symmetric.
AxisStencil distorted_axis(const Grid& g, double h, const DistortionProfile& prof) {
    const int n = g.points_per_axis;
    const double dx = g.dx();
    const double w = h * h / (dx * dx);
    const Complex I(0.0, 1.0);
    auto gfun = [&](double x) { return 1.0 + I * prof.theta * prof.fprime(x); };
    AxisStencil st;
    st.diag.assign(n, Complex(0));
    st.off.assign(n - 1, Complex(0));
    std::vector<Complex> gi(n), gh(n + 1);
    for (int i = 0; i < n; ++i) gi[i] = gfun(g.coord(i));
    for (int i = 0; i <= n; ++i) gh[i] = gfun(g.coord(i) - 0.5 * dx);
    for (int i = 0; i < n; ++i)
        st.diag[i] = w / gi[i] * (1.0 / gh[i] + 1.0 / gh[i + 1]);
    for (int i = 0; i + 1 < n; ++i)
        st.off[i] = -w / (gh[i + 1] * std::sqrt(gi[i] * gi[i + 1]));
    return st;
}

DiscretizedOperator assemble_from(const Grid& grid, double h, const AxisStencil& ax,
                                  const std::function<Complex(const double*)>& vfun) {
    DiscretizedOperator op;
    op.grid = grid;
    op.h = h;
    const int n = grid.points_per_axis;
    const std::size_t total = grid.size();
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(total * (grid.dim == 2 ? 5 : 3));

    if (grid.dim == 1) {
        for (int i = 0; i < n; ++i) {
            double x[2] = {grid.coord(i), 0.0};
            trips.emplace_back(i, i, ax.diag[i] + vfun(x));
            if (i + 1 < n) {
                trips.emplace_back(i, i + 1, ax.off[i]);
                trips.emplace_back(i + 1, i, ax.off[i]);
            }
        }
    } else {
        auto id = [n](int i, int j) { return i * n + j; };
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double x[2] = {grid.coord(i), grid.coord(j)};
                trips.emplace_back(id(i, j), id(i, j), ax.diag[i] + ax.diag[j] + vfun(x));
                if (i + 1 < n) {
                    trips.emplace_back(id(i, j), id(i + 1, j), ax.off[i]);
                    trips.emplace_back(id(i + 1, j), id(i, j), ax.off[i]);
                }
                if (j + 1 < n) {
                    trips.emplace_back(id(i, j), id(i, j + 1), ax.off[j]);
                    trips.emplace_back(id(i, j + 1), id(i, j), ax.off[j]);
                }
            }
        }
    }
    op.matrix.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    op.matrix.setFromTriplets(trips.begin(), trips.end());
    op.matrix.makeCompressed();
    return op;
}

}  // namespace

DiscretizedOperator assemble_plain(const PotentialSpec& spec, const Grid& grid,
                                   double h) {
    if (h <= 0.0) throw std::invalid_argument("assemble_plain: h must be positive");
    // de Broglie resolution check; a coarse grid is a warning, not fatal
    const double wavelength = 2.0 * M_PI * h / std::sqrt(std::max(spec.level, 1e-12));
    if (grid.dx() > wavelength / 8.0)
        std::fprintf(stderr,
                     "[reslab] warning: grid resolves %.1f points per sea wavelength "
                     "(< 8) at h=%g\n",
                     wavelength / grid.dx(), h);
    auto ax = plain_axis(grid, h);
    auto vfun = [&spec](const double* x) { return Complex(spec.value(x)); };
    auto op = assemble_from(grid, h, ax, vfun);
    op.kind = OperatorKind::Plain;
    op.is_real = true;
    return op;
}

DiscretizedOperator assemble_distorted(const PotentialSpec& spec, const Grid& grid,
                                       double h, const DistortionProfile& profile) {
    if (profile.theta < 0.0 || profile.theta >= spec.sector_delta)
        throw std::invalid_argument("assemble_distorted: theta outside [0, sector_delta)");
    if (profile.r1 >= grid.box_radius)
        throw std::invalid_argument("assemble_distorted: R1 must be below the box radius");
    if (!spec.has_complex_eval())
        throw std::invalid_argument(
            "assemble_distorted: potential lacks holomorphic evaluation");

    const Complex I(0.0, 1.0);
    auto ax = profile.theta == 0.0 ? plain_axis(grid, h) : distorted_axis(grid, h, profile);
    auto vfun = [&spec, &profile, I](const double* x) {
        Complex z[2] = {x[0] + I * profile.theta * profile.f(x[0]),
                        x[1] + I * profile.theta * profile.f(x[1])};
        return spec.value_c(z);
    };
    auto op = assemble_from(grid, h, ax, vfun);
    op.kind = OperatorKind::Distorted;
    op.is_real = (profile.theta == 0.0);
    op.distortion = profile;
    return op;
}

DiscretizedOperator assemble_filled(const PotentialSpec& spec, const Grid& grid,
                                    double h, const FilledWellSpec& fill,
                                    const SublevelDecomposition& decomp) {
    // reject fills that reach the well boundary
    for (const auto& p : decomp.well_boundary) {
        double q[2] = {p[0], decomp.grid.dim == 2 ? p[1] : 0.0};
        if (distance_to_sea(decomp, q) <= fill.transition_width)
            throw std::invalid_argument(
                "assemble_filled: transition region touches the well boundary");
    }
    auto smooth = [](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    };
    auto vfun = [&](const double* x) {
        double dist = distance_to_sea(decomp, x);
        double s = 1.0 - smooth(dist / fill.transition_width);
        return Complex((1.0 - s) * spec.value(x) + s * fill.fill_level);
    };
    auto ax = plain_axis(grid, h);
    auto op = assemble_from(grid, h, ax, vfun);
    op.kind = OperatorKind::Filled;
    op.is_real = true;
    op.fill = fill;
    return op;
}

int grid_points_for(double h, double box_radius, double level,
                    int points_per_wavelength, int floor_points, int cap_points) {
    const double wavelength = 2.0 * M_PI * h / std::sqrt(level);
    const double dx = wavelength / points_per_wavelength;
    int n = static_cast<int>(std::ceil(2.0 * box_radius / dx));
    n = std::max(n, floor_points);
    n = std::min(n, cap_points);
    return n;
}

void export_triplets(const DiscretizedOperator& op, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_triplets: cannot open " + path);
    char line[128];
    for (int k = 0; k < op.matrix.outerSize(); ++k) {
        for (SparseC::InnerIterator it(op.matrix, k); it; ++it) {
            std::snprintf(line, sizeof(line), "%ld %ld %.17g %.17g\n",
                          static_cast<long>(it.row()), static_cast<long>(it.col()),
                          it.value().real(), it.value().imag());
            out << line;
        }
    }
}

}  // namespace reslab
