#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reslab/sublevel.hpp"

using namespace reslab;

TEST_CASE("gauss1d boundaries match the bisection oracle") {
    auto spec = builtin_potential("gauss1d");
    auto d = classify_sublevel(spec, 1024, 8.0);
    const double xa = oracles::gauss1d_xa();
    const double xb = oracles::gauss1d_xb();
    REQUIRE(d.well_boundary.size() == 2);
    REQUIRE(d.sea_boundary.size() == 2);
    for (const auto& p : d.well_boundary)
        CHECK(std::abs(std::abs(p[0]) - xa) < 1e-8);
    for (const auto& p : d.sea_boundary)
        CHECK(std::abs(std::abs(p[0]) - xb) < 1e-8);
    CHECK(xa == doctest::Approx(0.3800).epsilon(2e-4));
    CHECK(xb == doctest::Approx(1.80601).epsilon(1e-4));
    CHECK(d.well_compact_connected);
    CHECK(d.well_sea_disjoint);
}

TEST_CASE("labels partition {V<=0} into well and sea") {
    auto spec = builtin_potential("gauss1d");
    auto d = classify_sublevel(spec, 512, 8.0);
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        double x[2];
        d.grid.center(i, x);
        double v = spec.value(x);
        if (v > 0.0)
            CHECK(d.labels[i] == CellLabel::Barrier);
        else
            CHECK(d.labels[i] != CellLabel::Barrier);
    }
}

TEST_CASE("2D radial boundaries lie on circles") {
    auto spec = builtin_potential("gauss2d_radial");
    auto d = classify_sublevel(spec, 256, 8.0);
    const double xa = oracles::gauss1d_xa();
    const double xb = oracles::gauss1d_xb();
    const double cell = d.grid.dx();
    REQUIRE(!d.well_boundary.empty());
    REQUIRE(!d.sea_boundary.empty());
    for (const auto& p : d.well_boundary)
        CHECK(std::abs(std::hypot(p[0], p[1]) - xa) < cell);
    for (const auto& p : d.sea_boundary)
        CHECK(std::abs(std::hypot(p[0], p[1]) - xb) < cell);
}

TEST_CASE("degenerate and invalid inputs") {
    PotentialSpec flat;
    flat.name = "flat";
    flat.dim = 1;
    flat.level = 1.0;
    flat.far_radius = 1.0;
    flat.value = [](const double*) { return -1.0; };
    flat.gradient = [](const double*, double* g) { g[0] = 0.0; };
    CHECK_THROWS_AS(classify_sublevel(flat, 256, 8.0), AssumptionError);

    auto spec = builtin_potential("gauss1d");
    CHECK_THROWS_AS(classify_sublevel(spec, 32, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(classify_sublevel(spec, 256, 1.0), std::invalid_argument);
}

TEST_CASE("two bounded components are rejected") {
    // twin wells: violates Assumption 1 as stated
    PotentialSpec twin;
    twin.name = "twin";
    twin.dim = 1;
    twin.level = 1.0;
    twin.far_radius = 10.0;
    twin.value = [](const double* x) {
        double a = x[0] - 2.0, b = x[0] + 2.0;
        return -1.0 + 2.2 * std::exp(-x[0] * x[0] / 16.0) -
               2.0 * std::exp(-4.0 * a * a) - 2.0 * std::exp(-4.0 * b * b);
    };
    twin.gradient = [](const double*, double* g) { g[0] = 0.0; };
    CHECK_THROWS_AS(classify_sublevel(twin, 512, 12.0), AssumptionError);
}

TEST_CASE("boundary location converges at first order in the cell size") {
    auto spec = builtin_potential("gauss2d_radial");
    auto d1 = classify_sublevel(spec, 128, 8.0);
    auto d2 = classify_sublevel(spec, 256, 8.0);
    // Hausdorff distance between dU point sets at N and 2N below 2 * side / N
    double worst = 0.0;
    for (const auto& p : d1.well_boundary) {
        double best = 1e300;
        for (const auto& q : d2.well_boundary)
            best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1]));
        worst = std::max(worst, best);
    }
    CHECK(worst <= 2.0 * 16.0 / 128.0);
}

TEST_CASE("ring_trap still satisfies the single-well decomposition") {
    auto spec = make_potential("ring_trap");
    auto d = classify_sublevel(spec, 256, 8.0);
    CHECK(d.well_compact_connected);
    CHECK(d.well_sea_disjoint);
}

TEST_CASE("distance to sea") {
    auto spec = builtin_potential("gauss1d");
    auto d = classify_sublevel(spec, 1024, 8.0);
    const double xb = oracles::gauss1d_xb();
    double x0[1] = {0.0};
    CHECK(distance_to_sea(d, x0) == doctest::Approx(xb).epsilon(1e-3));
    double x1[1] = {5.0};
    CHECK(distance_to_sea(d, x1) == 0.0);
    double x2[1] = {1.5};
    CHECK(distance_to_sea(d, x2) == doctest::Approx(xb - 1.5).epsilon(1e-2));
}
