#include "reslab/sublevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace reslab {

namespace {

// Root of V along the segment a..b (V(a), V(b) of opposite sign), bisection
// to 1e-10 in the segment parameter.
std::array<double, 2> edge_root(const PotentialSpec& spec, const double* a,
                                const double* b) {
    double lo = 0.0, hi = 1.0;
    auto eval = [&](double t) {
        double p[2] = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
        return spec.value(p);
    };
    double va = eval(0.0);
    for (int it = 0; it < 60 && (hi - lo) > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        double vm = eval(mid);
        if ((va <= 0.0) == (vm <= 0.0))
            lo = mid;
        else
            hi = mid;
    }
    double t = 0.5 * (lo + hi);
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

}  // namespace

CellLabel SublevelDecomposition::label_at(const double* x) const {
    const auto& g = grid;
    int n = g.cells_per_axis;
    auto clampi = [n](int i) { return std::min(std::max(i, 0), n - 1); };
    int i = clampi(static_cast<int>(std::floor((x[0] + g.box_radius) / g.dx())));
    if (g.dim == 2) {
        int j = clampi(static_cast<int>(std::floor((x[1] + g.box_radius) / g.dx())));
        return labels[g.index(i, j)];
    }
    return labels[g.index(i)];
}

SublevelDecomposition classify_sublevel(const PotentialSpec& spec,
                                        int cells_per_axis, double box_radius) {
    if (cells_per_axis < 64)
        throw std::invalid_argument("classify_sublevel: resolution must be >= 64");
    if (box_radius < spec.far_radius)
        throw std::invalid_argument("classify_sublevel: box_radius below far_radius");

    SublevelDecomposition out;
    out.grid = ClassifyGrid{spec.dim, box_radius, cells_per_axis};
    const ClassifyGrid& g = out.grid;
    const std::size_t count = g.cell_count();
    const int n = cells_per_axis;

    std::vector<double> v(count);
    out.labels.assign(count, CellLabel::Barrier);

    for (std::size_t idx = 0; idx < count; ++idx) {
        double x[2] = {0.0, 0.0};
        g.center(idx, x);
        v[idx] = spec.value(x);
        if (!std::isfinite(v[idx]))
            throw std::runtime_error("classify_sublevel: non-finite V sample");

    }

    // Flood fill components of {V <= 0}; mark those touching the box boundary
    // as sea, track bounded components separately.
    std::vector<int> comp(count, -1);
    int ncomp = 0;
    std::vector<bool> touches_boundary;
    for (std::size_t start = 0; start < count; ++start) {
        if (v[start] > 0.0 || comp[start] >= 0) continue;
        touches_boundary.push_back(false);
        std::queue<std::size_t> q;
        q.push(start);
        comp[start] = ncomp;
        while (!q.empty()) {
            std::size_t c = q.front();
            q.pop();
            int i = g.dim == 2 ? static_cast<int>(c) / n : static_cast<int>(c);
            int j = g.dim == 2 ? static_cast<int>(c) % n : 0;
            if (i == 0 || i == n - 1 || (g.dim == 2 && (j == 0 || j == n - 1)))
                touches_boundary[ncomp] = true;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            int nnb = g.dim == 2 ? 4 : 2;
            for (int k = 0; k < nnb; ++k) {
                int ii = i + di[k], jj = j + dj[k];
                if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                std::size_t nb = g.index(ii, jj);
                if (v[nb] <= 0.0 && comp[nb] < 0) {
                    comp[nb] = ncomp;
                    q.push(nb);
                }
            }
        }
        ++ncomp;
    }

    int well_comp = -1;
    int bounded = 0;
    for (int c = 0; c < ncomp; ++c) {
        if (!touches_boundary[c]) {
            ++bounded;
            well_comp = c;
        }
    }
    if (bounded == 0)
        throw AssumptionError("Assumption 1",
                              "no bounded component of {V<=0}: no well/barrier");
    if (bounded > 1)
        throw AssumptionError("Assumption 1",
                              "more than one bounded component of {V<=0}");

    for (std::size_t idx = 0; idx < count; ++idx) {
        if (v[idx] > 0.0)
            out.labels[idx] = CellLabel::Barrier;
        else
            out.labels[idx] = (comp[idx] == well_comp) ? CellLabel::Well : CellLabel::Sea;
    }

    // Boundary extraction: bisection along edges whose endpoints straddle V=0.
    auto push_boundary = [&](std::size_t a, std::size_t b, CellLabel neg_label) {
        double xa[2] = {0, 0}, xb[2] = {0, 0};
        g.center(a, xa);
        g.center(b, xb);
        auto p = edge_root(spec, xa, xb);
        if (neg_label == CellLabel::Well)
            out.well_boundary.push_back(p);
        else
            out.sea_boundary.push_back(p);
    };
    bool well_sea_adjacent = false;
    for (std::size_t idx = 0; idx < count; ++idx) {
        int i = g.dim == 2 ? static_cast<int>(idx) / n : static_cast<int>(idx);
        int j = g.dim == 2 ? static_cast<int>(idx) % n : 0;
        const int di[2] = {1, 0};
        const int dj[2] = {0, 1};
        int nd = g.dim == 2 ? 2 : 1;
        for (int k = 0; k < nd; ++k) {
            int ii = i + di[k], jj = j + dj[k];
            if (ii >= n || jj >= n) continue;
            std::size_t nb = g.index(ii, jj);
            bool a_neg = v[idx] <= 0.0, b_neg = v[nb] <= 0.0;
            if (a_neg == b_neg) {
                if (a_neg && out.labels[idx] != out.labels[nb]) well_sea_adjacent = true;
                continue;
            }
            std::size_t neg = a_neg ? idx : nb;
            push_boundary(idx, nb, out.labels[neg]);
        }
    }

    out.well_compact_connected = true;  // established above
    out.well_sea_disjoint = !well_sea_adjacent;
    if (well_sea_adjacent)
        throw AssumptionError("Assumption 1",
                              "well and sea are not separated by a barrier cell");
    return out;
}

double distance_to_sea(const SublevelDecomposition& d, const double* x) {
    double p[2] = {x[0], d.grid.dim == 2 ? x[1] : 0.0};
    if (d.label_at(p) == CellLabel::Sea) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : d.sea_boundary) {
        double dx = p[0] - q[0];
        double dy = d.grid.dim == 2 ? p[1] - q[1] : 0.0;
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
    }
    return best;
}

}  // namespace reslab
