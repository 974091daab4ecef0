#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "reslab/agmon.hpp"

using namespace reslab;

namespace {

PotentialSpec annulus(int dim, double a, double b) {
    PotentialSpec s;
    s.name = "annulus";
    s.dim = dim;
    s.level = 1.0;
    s.far_radius = b + 0.5;
    s.value = [dim, a, b](const double* x) {
        double r = std::hypot(x[0], dim == 2 ? x[1] : 0.0);
        return (r >= a && r <= b) ? 1.0 : -1.0;
    };
    s.gradient = [dim](const double*, double* g) {
        g[0] = 0.0;
        if (dim == 2) g[1] = 0.0;
    };
    return s;
}

}  // namespace

TEST_CASE("1D S0 against the quadrature oracle") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 4096, 8.0);
    auto field = solve_eikonal(decomp, spec);
    const double oracle = oracles::gauss1d_action();
    CHECK(oracle == doctest::Approx(1.4635).epsilon(2e-4));
    CHECK(std::abs(field.S0 - oracle) / oracle < 0.005);
    // library quadrature agrees with the independent test oracle
    CHECK(axis_action_oracle(spec, 0) == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("d vanishes on the well and increases along acceptance order") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 1024, 8.0);
    auto field = solve_eikonal(decomp, spec);
    double last = -1.0;
    std::vector<std::pair<std::int64_t, double>> order;
    for (std::size_t i = 0; i < field.d.size(); ++i) {
        if (decomp.labels[i] == CellLabel::Well) CHECK(field.d[i] == 0.0);
        if (field.accept_order[i] >= 0) order.emplace_back(field.accept_order[i], field.d[i]);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [ord, dv] : order) {
        CHECK(dv >= last - 1e-12);
        last = std::max(last, dv);
    }
}

TEST_CASE("eikonal residual is small inside the barrier") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 4096, 8.0);
    auto field = solve_eikonal(decomp, spec);
    const auto& g = field.grid;
    const double dx = g.dx();
    const double xa = oracles::gauss1d_xa(), xb = oracles::gauss1d_xb();
    double worst = 0.0;
    int checked = 0;
    for (int i = 1; i + 1 < g.cells_per_axis; ++i) {
        double x[2];
        g.center(g.index(i), x);
        // stay away from the degenerate endpoints
        if (x[0] < xa + 0.1 || x[0] > xb - 0.1) continue;
        double grad = (field.d[i + 1] - field.d[i - 1]) / (2 * dx);
        double res = std::abs(grad * grad - std::max(spec.value(x), 0.0));
        worst = std::max(worst, res);
        ++checked;
    }
    CHECK(checked > 100);
    CHECK(worst < 25.0 * dx);
}

TEST_CASE("metric scaling: 4V on the barrier doubles S0") {
    auto spec = builtin_potential("gauss1d");
    auto spec4 = scale_barrier(spec, 2.0);
    auto d1 = classify_sublevel(spec, 2048, 8.0);
    auto d4 = classify_sublevel(spec4, 2048, 8.0);
    auto f1 = solve_eikonal(d1, spec);
    auto f4 = solve_eikonal(d4, spec4);
    CHECK(std::abs(f4.S0 - 2.0 * f1.S0) / (2.0 * f1.S0) < 1e-12);
}

TEST_CASE("constant-speed annulus reproduces the euclidean width") {
    SUBCASE("1D") {
        auto spec = annulus(1, 1.0, 2.5);
        auto decomp = classify_sublevel(spec, 1024, 6.0);
        auto field = solve_eikonal(decomp, spec);
        CHECK(field.S0 == doctest::Approx(1.5).epsilon(5e-3));
    }
    SUBCASE("2D") {
        auto spec = annulus(2, 1.0, 2.5);
        auto decomp = classify_sublevel(spec, 256, 6.0);
        auto field = solve_eikonal(decomp, spec);
        CHECK(field.S0 == doctest::Approx(1.5).epsilon(2e-2));
    }
}

TEST_CASE("2D radial S0 matches the radial quadrature") {
    auto spec = builtin_potential("gauss2d_radial");
    auto decomp = classify_sublevel(spec, 256, 8.0);
    auto field = solve_eikonal(decomp, spec);
    const double oracle = oracles::gauss1d_action();
    CHECK(std::abs(field.S0 - oracle) / oracle < 0.02);
}

TEST_CASE("upper-bound convergence from above") {
    auto spec = builtin_potential("gauss2d_radial");
    auto dN = classify_sublevel(spec, 128, 8.0);
    auto d2N = classify_sublevel(spec, 256, 8.0);
    double sN = solve_eikonal(dN, spec).S0;
    double s2N = solve_eikonal(d2N, spec).S0;
    const double oracle = oracles::gauss1d_action();
    CHECK(sN >= s2N - 40.0 / 128.0);
    CHECK(std::abs(s2N - oracle) <= std::abs(sN - oracle) + 0.01);
}

TEST_CASE("even-potential symmetry of d") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 1024, 8.0);
    auto field = solve_eikonal(decomp, spec);
    const auto& g = field.grid;
    for (int i = 0; i < g.cells_per_axis / 2; i += 7) {
        int j = g.cells_per_axis - 1 - i;
        if (!std::isfinite(field.d[i])) continue;
        CHECK(std::abs(field.d[i] - field.d[j]) <
              g.dx() * 1.5 * std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("sampled triangle inequality in the barrier") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 2048, 8.0);
    auto field = solve_eikonal(decomp, spec);
    const auto& g = field.grid;
    auto dat = [&](double x) { return field.interpolate(&x); };
    const double xa = oracles::gauss1d_xa(), xb = oracles::gauss1d_xb();
    for (double y = xa + 0.05; y < xb - 0.3; y += 0.2) {
        for (double x = y + 0.05; x < xb - 0.05; x += 0.15) {
            // segment action y -> x by fine Simpson
            double act = oracles::quad(
                [&](double t) { return std::sqrt(std::max(spec.value(&t), 0.0)); }, y, x,
                1e-9);
            CHECK(dat(x) <= dat(y) + act + 5.0 * g.dx());
        }
    }
}

TEST_CASE("gauss1d geodesics: two segments with the right endpoints") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 2048, 8.0);
    auto field = solve_eikonal(decomp, spec);
    auto gs = extract_geodesics(field, decomp, spec);
    const double xa = oracles::gauss1d_xa(), xb = oracles::gauss1d_xb();
    REQUIRE(gs.geodesics.size() == 2);
    CHECK(gs.finite_count);
    std::vector<double> t1x, ux;
    for (const auto& p : gs.t1) t1x.push_back(p[0]);
    for (const auto& p : gs.u_touch) ux.push_back(p[0]);
    std::sort(t1x.begin(), t1x.end());
    std::sort(ux.begin(), ux.end());
    CHECK(t1x[0] == doctest::Approx(-xb).epsilon(1e-2));
    CHECK(t1x[1] == doctest::Approx(xb).epsilon(1e-2));
    CHECK(std::abs(ux[0]) == doctest::Approx(xa).epsilon(0.05));
    CHECK(std::abs(ux[1]) == doctest::Approx(xa).epsilon(0.05));
    for (const auto& geo : gs.geodesics)
        CHECK(std::abs(geo.action - field.S0) / field.S0 < 0.02);
}

TEST_CASE("radial symmetry forces a geodesic continuum") {
    auto spec = builtin_potential("gauss2d_radial");
    auto decomp = classify_sublevel(spec, 256, 8.0);
    auto field = solve_eikonal(decomp, spec);
    auto gs = extract_geodesics(field, decomp, spec);
    CHECK_FALSE(gs.finite_count);
    CHECK(gs.geodesics.size() > 8);  // a ring of representatives
}

TEST_CASE("aniso: minimal geodesics run along the weak axis") {
    auto spec = builtin_potential("gauss2d_aniso");
    auto decomp = classify_sublevel(spec, 256, 8.0);
    auto field = solve_eikonal(decomp, spec);

    // oracle: y-section action is strictly smaller than the x-section action
    auto vy = [&](double t) {
        double p[2] = {0.0, t};
        return spec.value(p);
    };
    double ya = oracles::bisect(vy, 0.1, 1.0);
    double yb = oracles::bisect([&](double t) { return -vy(t); }, 1.0, 4.0);
    double act_y = oracles::quad(
        [&](double t) { return std::sqrt(std::max(vy(t), 0.0)); }, ya, yb, 1e-10);
    double act_x = oracles::gauss1d_action();
    CHECK(act_y < act_x);

    // S0(aniso) <= x-axis section action (admissible-path upper bound)
    CHECK(field.S0 <= act_x + 0.01);
    CHECK(std::abs(field.S0 - act_y) / act_y < 0.02);

    auto gs = extract_geodesics(field, decomp, spec);
    REQUIRE(gs.geodesics.size() == 2);
    CHECK(gs.finite_count);
    for (const auto& p : gs.t1) {
        CHECK(std::abs(p[0]) < 0.2);                       // on the y axis
        CHECK(std::abs(std::abs(p[1]) - yb) < 0.05);
    }
    for (const auto& geo : gs.geodesics)
        CHECK(std::abs(geo.action - field.S0) / field.S0 < 0.02);
}

TEST_CASE("error paths") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 256, 8.0);
    SublevelDecomposition empty_sea = decomp;
    empty_sea.sea_boundary.clear();
    auto field = solve_eikonal(decomp, spec);
    CHECK_THROWS(agmon_distance(field, empty_sea, spec));
}
