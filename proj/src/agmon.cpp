#include "reslab/agmon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace reslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double speed_at(const PotentialSpec& spec, const double* x) {
    double v = spec.value(x);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

// Simpson approximation of the action integral of sqrt(max(V,0)) along the
// straight segment a..b. Good enough for subcell corrections.
double segment_action(const PotentialSpec& spec, const double* a, const double* b) {
    double m[2] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    double fa = speed_at(spec, a), fm = speed_at(spec, m), fb = speed_at(spec, b);
    return len * (fa + 4.0 * fm + fb) / 6.0;
}

struct HeapEntry {
    double d;
    std::size_t idx;
    bool operator>(const HeapEntry& o) const { return d > o.d; }
};

double simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    double left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
    double right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_adaptive(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           simpson_adaptive(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    double m = 0.5 * (a + b);
    return simpson_adaptive(f, a, b, f(a), f(m), f(b), tol, 40);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        if ((f(mid) <= 0.0) == (flo <= 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double interp_field(const ClassifyGrid& g, const std::vector<double>& d,
                    const double* x) {
    const int n = g.cells_per_axis;
    const double h = g.dx();
    auto axis = [&](double c) {
        double t = (c + g.box_radius) / h - 0.5;
        int i = static_cast<int>(std::floor(t));
        double f = t - i;
        i = std::min(std::max(i, 0), n - 2);
        f = std::min(std::max(f, 0.0), 1.0);
        return std::pair<int, double>(i, f);
    };
    auto [i, fx] = axis(x[0]);
    // accumulate skipping zero-weight cells, so infinite entries (sea cells
    // of the direct field) only matter when they actually carry weight
    double acc = 0.0;
    bool hit_inf = false;
    auto add = [&](double w, double v) {
        if (w <= 1e-14) return;
        if (!std::isfinite(v)) {
            hit_inf = true;
            return;
        }
        acc += w * v;
    };
    if (g.dim == 1) {
        add(1 - fx, d[g.index(i)]);
        add(fx, d[g.index(i + 1)]);
        return hit_inf ? kInf : acc;
    }
    auto [j, fy] = axis(x[1]);
    add((1 - fx) * (1 - fy), d[g.index(i, j)]);
    add(fx * (1 - fy), d[g.index(i + 1, j)]);
    add((1 - fx) * fy, d[g.index(i, j + 1)]);
    add(fx * fy, d[g.index(i + 1, j + 1)]);
    return hit_inf ? kInf : acc;
}

// Boundary-corrected field value at a dM point: smallest neighbor-cell value
// plus the fractional-cell action along the connecting segment.
double boundary_value(const ClassifyGrid& g, const SublevelDecomposition& decomp,
                      const PotentialSpec& spec, const std::vector<double>& d,
                      const std::array<double, 2>& p) {
    const int n = g.cells_per_axis;
    const double h = g.dx();
    double q[2] = {p[0], g.dim == 2 ? p[1] : 0.0};
    int pi = std::min(std::max(static_cast<int>(std::floor((q[0] + g.box_radius) / h)), 0), n - 1);
    int pj = g.dim == 2
                 ? std::min(std::max(static_cast<int>(std::floor((q[1] + g.box_radius) / h)), 0), n - 1)
                 : 0;
    double best = kInf;
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            if (g.dim == 1 && dj != 0) continue;
            int ii = pi + di, jj = pj + dj;
            if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
            std::size_t ci = g.index(ii, jj);
            if (decomp.labels[ci] != CellLabel::Barrier) continue;
            if (!std::isfinite(d[ci])) continue;
            double xc[2] = {0, 0};
            g.center(ci, xc);
            best = std::min(best, d[ci] + segment_action(spec, xc, q));
        }
    }
    return best;
}

}  // namespace

double AgmonField::interpolate(const double* x) const {
    return interp_field(grid, d, x);
}

double AgmonField::interpolate_direct(const double* x) const {
    return interp_field(grid, d_direct, x);
}

AgmonField solve_eikonal(const SublevelDecomposition& decomp,
                         const PotentialSpec& spec) {
    const ClassifyGrid& g = decomp.grid;
    const int n = g.cells_per_axis;
    const double h = g.dx();
    const std::size_t count = g.cell_count();

    bool any_well = false, any_barrier = false;
    for (auto l : decomp.labels) {
        any_well |= (l == CellLabel::Well);
        any_barrier |= (l == CellLabel::Barrier);
    }
    if (!any_well || !any_barrier)
        throw std::runtime_error("solve_eikonal: decomposition lacks well or barrier");

    std::vector<double> speed(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        double x[2] = {0, 0};
        g.center(idx, x);
        if (!std::isfinite(spec.value(x)))
            throw std::runtime_error("solve_eikonal: non-finite V sample");
        speed[idx] = decomp.labels[idx] == CellLabel::Well ? 0.0 : speed_at(spec, x);
    }

    auto neighbors = [&](std::size_t idx, auto&& fn) {
        int i = g.dim == 2 ? static_cast<int>(idx) / n : static_cast<int>(idx);
        int j = g.dim == 2 ? static_cast<int>(idx) % n : 0;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        int nnb = g.dim == 2 ? 4 : 2;
        for (int k = 0; k < nnb; ++k) {
            int ii = i + di[k], jj = j + dj[k];
            if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
            fn(g.index(ii, jj), k / 2);
        }
    };
    // 8-neighborhood for the marching relaxation in 2D (the simplex update
    // needs the diagonals; with axis-only stencils the diagonal directions
    // carry a percent-level overestimate that poisons the exit-point search)
    auto neighbors_upd = [&](std::size_t idx, auto&& fn) {
        if (g.dim == 1) {
            neighbors(idx, [&](std::size_t nb, int) { fn(nb); });
            return;
        }
        int i = static_cast<int>(idx) / n;
        int j = static_cast<int>(idx) % n;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                int ii = i + di, jj = j + dj;
                if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                fn(g.index(ii, jj));
            }
    };

    // One marching pass. include_sea=false skips sea cells entirely, giving
    // the barrier-only distance whose minimizers are single-touch geodesics.
    auto march = [&](bool include_sea, std::vector<double>& d,
                     std::vector<std::uint8_t>& frozen,
                     std::vector<std::int64_t>* order_out) {
        d.assign(count, kInf);
        frozen.assign(count, 0);
        if (order_out) order_out->assign(count, -1);
        std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;

        for (std::size_t idx = 0; idx < count; ++idx) {
            if (decomp.labels[idx] == CellLabel::Well) {
                d[idx] = 0.0;
                frozen[idx] = 1;
            }
        }

        // seed the first barrier ring with subcell line integrals
        for (std::size_t idx = 0; idx < count; ++idx) {
            if (decomp.labels[idx] != CellLabel::Barrier) continue;
            double xc[2] = {0, 0};
            g.center(idx, xc);
            neighbors(idx, [&](std::size_t nb, int) {
                if (decomp.labels[nb] != CellLabel::Well) return;
                double xw[2] = {0, 0};
                g.center(nb, xw);
                double cross[2];
                auto f = [&](double t) {
                    double p[2] = {xw[0] + t * (xc[0] - xw[0]), xw[1] + t * (xc[1] - xw[1])};
                    return spec.value(p);
                };
                double t = bisect(f, 0.0, 1.0);
                cross[0] = xw[0] + t * (xc[0] - xw[0]);
                cross[1] = xw[1] + t * (xc[1] - xw[1]);
                double a = segment_action(spec, cross, xc);
                if (a < d[idx]) {
                    d[idx] = a;
                    heap.push({a, idx});
                }
            });
        }

        // upwind update: in 1D the axis update, in 2D the 8-point simplex
        // update (each 45-degree triangle between an axis neighbor and the
        // adjacent diagonal neighbor is minimized in closed form)
        auto solve_cell = [&](std::size_t idx) {
            double c = speed[idx];
            const double ch = c * h;
            int i = g.dim == 2 ? static_cast<int>(idx) / n : static_cast<int>(idx);
            int j = g.dim == 2 ? static_cast<int>(idx) % n : 0;
            auto value_at = [&](int ii, int jj) {
                if (ii < 0 || ii >= n || (g.dim == 2 && (jj < 0 || jj >= n))) return kInf;
                std::size_t nb = g.index(ii, jj);
                return frozen[nb] && std::isfinite(d[nb]) ? d[nb] : kInf;
            };
            if (g.dim == 1) {
                double best = std::min(value_at(i - 1, 0), value_at(i + 1, 0));
                if (best == kInf) return kInf;
                return c == 0.0 ? best : best + ch;
            }
            double best = kInf;
            const int ax_i[4] = {1, -1, 0, 0};
            const int ax_j[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                double ua = value_at(i + ax_i[k], j + ax_j[k]);
                if (ua == kInf) continue;
                best = std::min(best, c == 0.0 ? ua : ua + ch);
                // two adjacent diagonals complete the simplex fan
                for (int s = -1; s <= 1; s += 2) {
                    int dii = ax_i[k] == 0 ? s : ax_i[k];
                    int djj = ax_j[k] == 0 ? s : ax_j[k];
                    double ud = value_at(i + dii, j + djj);
                    if (ud == kInf) continue;
                    if (c == 0.0) {
                        best = std::min(best, ud);
                        continue;
                    }
                    best = std::min(best, ud + ch * std::sqrt(2.0));
                    double du = ud - ua;
                    if (du < 0.0 && -du < ch) {
                        double t = -du / std::sqrt(ch * ch - du * du);
                        if (t >= 0.0 && t <= 1.0)
                            best = std::min(best,
                                            ua + du * t + ch * std::sqrt(1.0 + t * t));
                    }
                }
            }
            return best;
        };

        std::int64_t order = 0;
        while (!heap.empty()) {
            auto [dv, idx] = heap.top();
            heap.pop();
            if (frozen[idx] || dv > d[idx] * (1.0 + 1e-14) + 1e-300) continue;
            frozen[idx] = 1;
            if (order_out) (*order_out)[idx] = order++;
            neighbors_upd(idx, [&](std::size_t nb) {
                if (frozen[nb]) return;
                if (!include_sea && decomp.labels[nb] == CellLabel::Sea) return;
                double cand = solve_cell(nb);
                if (cand < d[nb]) {
                    d[nb] = cand;
                    heap.push({cand, nb});
                }
            });
        }
    };

    AgmonField out;
    out.grid = g;
    march(true, out.d, out.frozen, &out.accept_order);
    std::vector<std::uint8_t> frozen_direct;
    march(false, out.d_direct, frozen_direct, nullptr);

    out.S0 = agmon_distance(out, decomp, spec);
    const double slack = out.S0 * 1e-6 + 1e-12;
    for (const auto& p : decomp.sea_boundary) {
        double val = boundary_value(g, decomp, spec, out.d_direct, p);
        if (val <= out.S0 + slack) out.first_contact.push_back(p);
    }
    return out;
}

double agmon_distance(const AgmonField& field, const SublevelDecomposition& decomp,
                      const PotentialSpec& spec) {
    if (decomp.sea_boundary.empty())
        throw std::runtime_error("agmon_distance: empty dM boundary");
    double best = kInf;
    for (const auto& p : decomp.sea_boundary)
        best = std::min(best, boundary_value(field.grid, decomp, spec,
                                             field.d_direct, p));
    if (!std::isfinite(best))
        throw std::runtime_error("agmon_distance: no frozen barrier cell adjacent to dM");
    return best;
}

GeodesicSet extract_geodesics(const AgmonField& field,
                              const SublevelDecomposition& decomp,
                              const PotentialSpec& spec, double tol) {
    const ClassifyGrid& g = field.grid;
    const double h = g.dx();
    const double S0 = field.S0;

    // Seeds: dM points minimal for the barrier-only distance. The sea route
    // equalizes the full d along all of dM, so the direct field is the one
    // that identifies the passes (the paper's minimal geodesics touch each
    // boundary once, which rules the sea shortcut out).
    struct Seed {
        std::array<double, 2> p;
        double d;
    };
    std::vector<Seed> seeds;
    for (const auto& p : decomp.sea_boundary) {
        double dv = boundary_value(g, decomp, spec, field.d_direct, p);
        if (dv <= S0 * (1.0 + tol)) seeds.push_back({p, dv});
    }
    if (seeds.empty())
        throw std::runtime_error("extract_geodesics: no minimal dM points found");
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.p[0] != b.p[0]) return a.p[0] < b.p[0];
        return a.p[1] < b.p[1];
    });

    auto backtrack = [&](const std::array<double, 2>& start) -> Geodesic {
        Geodesic geo;
        geo.sea_touch = start;
        double x[2] = {start[0], g.dim == 2 ? start[1] : 0.0};
        geo.points.push_back({x[0], x[1]});
        const double step = 0.4 * h;
        const int ndir = g.dim == 2 ? 16 : 2;
        // directional sampling descent on the (piecewise smooth) direct field
        auto descend_dir = [&](const double* from, double reach, double* dir) {
            double best = field.interpolate_direct(from);
            bool found = false;
            for (int kd = 0; kd < ndir; ++kd) {
                double ux, uy = 0.0;
                if (g.dim == 2) {
                    double ang = 2.0 * M_PI * kd / ndir;
                    ux = std::cos(ang);
                    uy = std::sin(ang);
                } else {
                    ux = (kd == 0) ? 1.0 : -1.0;
                }
                double probe[2] = {from[0] + reach * ux, from[1] + reach * uy};
                if (std::abs(probe[0]) > g.box_radius ||
                    (g.dim == 2 && std::abs(probe[1]) > g.box_radius))
                    continue;
                double dv = field.interpolate_direct(probe);
                if (std::isfinite(dv) && dv < best - 1e-15) {
                    best = dv;
                    dir[0] = ux;
                    dir[1] = uy;
                    found = true;
                }
            }
            return found;
        };
        for (int it = 0; it < 200000; ++it) {
            double p2[2] = {x[0], x[1]};
            if (decomp.label_at(p2) == CellLabel::Well) break;
            double dir[2] = {0, 0};
            bool ok = false;
            for (double reach = step; reach <= 4.5 * h; reach *= 2.0) {
                if (descend_dir(x, reach, dir)) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                throw std::runtime_error(
                    "extract_geodesics: descent stalled (local minimum of d in barrier)");
            double nxt[2] = {x[0] + step * dir[0], x[1] + step * dir[1]};
            double mid[2] = {0.5 * (x[0] + nxt[0]), 0.5 * (x[1] + nxt[1])};
            double v = spec.value(mid);
            geo.action += step * (v > 0.0 ? std::sqrt(v) : 0.0);
            x[0] = nxt[0];
            x[1] = nxt[1];
            geo.points.push_back({x[0], x[1]});
        }
        // refine the dU crossing along the last segment
        if (geo.points.size() >= 2) {
            auto& a = geo.points[geo.points.size() - 2];
            auto& b = geo.points.back();
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                double p[2] = {a[0] + mid * (b[0] - a[0]), a[1] + mid * (b[1] - a[1])};
                if (spec.value(p) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            double t = 0.5 * (lo + hi);
            geo.well_touch = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
            geo.points.back() = geo.well_touch;
        }
        return geo;
    };

    // Cluster the seed points into connected chains along dM (adjacency
    // within 2 cells). Whether a chain is a single geodesic or a continuum is
    // decided by shrinking the selection tolerance: near an isolated
    // (quadratic) minimum the chain extent contracts like sqrt(tol), while a
    // flat ring of minima keeps its extent.
    const double radius = 4.0 * h;
    std::vector<int> chain_of(seeds.size(), -1);
    int nchains = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (chain_of[i] >= 0) continue;
        std::vector<std::size_t> stack{i};
        chain_of[i] = nchains;
        while (!stack.empty()) {
            std::size_t c = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < seeds.size(); ++j) {
                if (chain_of[j] >= 0) continue;
                double dx = seeds[c].p[0] - seeds[j].p[0];
                double dy = seeds[c].p[1] - seeds[j].p[1];
                if (std::hypot(dx, dy) <= 2.0 * h) {
                    chain_of[j] = nchains;
                    stack.push_back(j);
                }
            }
        }
        ++nchains;
    }

    auto extent = [&](int chain, double dcut) {
        double lo0 = kInf, hi0 = -kInf, lo1 = kInf, hi1 = -kInf;
        bool any = false;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            if (chain_of[i] != chain || seeds[i].d > dcut) continue;
            any = true;
            lo0 = std::min(lo0, seeds[i].p[0]);
            hi0 = std::max(hi0, seeds[i].p[0]);
            lo1 = std::min(lo1, seeds[i].p[1]);
            hi1 = std::max(hi1, seeds[i].p[1]);
        }
        return any ? std::hypot(hi0 - lo0, hi1 - lo1) : 0.0;
    };

    GeodesicSet out;
    out.finite_count = true;
    for (int c = 0; c < nchains; ++c) {
        double ext_full = extent(c, S0 * (1.0 + tol));
        double ext_half = extent(c, S0 * (1.0 + 0.5 * tol));
        bool pointlike = ext_full <= radius || ext_half <= 0.85 * ext_full;
        if (pointlike) {
            // one representative: the minimal seed of the chain
            std::size_t best = seeds.size();
            for (std::size_t i = 0; i < seeds.size(); ++i)
                if (chain_of[i] == c && (best == seeds.size() || seeds[i].d < seeds[best].d))
                    best = i;
            Geodesic geo = backtrack(seeds[best].p);
            out.t1.push_back(geo.sea_touch);
            out.u_touch.push_back(geo.well_touch);
            out.geodesics.push_back(std::move(geo));
        } else {
            // continuum of minimal exits: keep a ring representation spaced
            // by the cluster radius
            out.finite_count = false;
            std::vector<bool> used(seeds.size(), false);
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                if (chain_of[i] != c || used[i]) continue;
                for (std::size_t j = i; j < seeds.size(); ++j) {
                    if (chain_of[j] != c || used[j]) continue;
                    double dx = seeds[i].p[0] - seeds[j].p[0];
                    double dy = seeds[i].p[1] - seeds[j].p[1];
                    if (std::hypot(dx, dy) <= radius) used[j] = true;
                }
                Geodesic geo = backtrack(seeds[i].p);
                out.t1.push_back(geo.sea_touch);
                out.u_touch.push_back(geo.well_touch);
                out.geodesics.push_back(std::move(geo));
            }
        }
    }
    return out;
}

double axis_action_oracle(const PotentialSpec& spec, int axis, double energy,
                          double tol) {
    auto vline = [&](double t) {
        double p[2] = {0.0, 0.0};
        p[axis] = t;
        return spec.value(p) - energy;
    };
    // bracket the barrier segment on the positive axis
    double a = -1.0, b = -1.0;
    double prev = vline(1e-6);
    double scan = 1e-6;
    const double lim = 50.0;
    for (double t = 0.01; t <= lim; t += 0.01) {
        double v = vline(t);
        if (prev <= 0.0 && v > 0.0 && a < 0.0) a = bisect(vline, scan, t);
        if (prev > 0.0 && v <= 0.0 && a >= 0.0) {
            b = bisect(vline, scan, t);
            break;
        }
        prev = v;
        scan = t;
    }
    if (a < 0.0 || b < 0.0)
        throw std::runtime_error("axis_action_oracle: no barrier segment found");
    auto f = [&](double t) {
        double v = vline(t);
        return v > 0.0 ? std::sqrt(v) : 0.0;
    };
    return integrate(f, a, b, tol);
}

}  // namespace reslab
