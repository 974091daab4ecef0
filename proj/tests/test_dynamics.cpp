#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reslab/dynamics.hpp"

using namespace reslab;

TEST_CASE("free motion: x(t) = x0 + 2 xi0 t") {
    auto spec = make_potential("const1d");
    PhasePoint z;
    z.x = {0.3, 0.0};
    z.xi = {0.7, 0.0};
    FlowOptions opt;
    opt.dt = 1e-4;
    opt.r_escape = 1e9;
    auto tr = flow(spec, z, 5.0, opt);
    const auto& last = tr.samples.back();
    CHECK(last.x[0] == doctest::Approx(0.3 + 2.0 * 0.7 * 5.0).epsilon(1e-10));
    CHECK(last.xi[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(tr.energy_drift < 1e-12);
}

TEST_CASE("outward push at the sea boundary and fixed point at the bottom") {
    auto spec = builtin_potential("gauss1d");
    const double xb = oracles::gauss1d_xb();
    // V'(xb) < 0, so xidot = -V' > 0: escapes outward
    double g[1];
    spec.gradient(&xb, g);
    CHECK(g[0] < 0.0);
    PhasePoint z;
    z.x = {xb, 0.0};
    FlowOptions opt;
    opt.dt = 1e-3;
    opt.r_escape = 6.0;
    opt.stop_on_escape = true;
    auto tr = flow(spec, z, 40.0, opt);
    CHECK(tr.escaped);

    PhasePoint origin;  // grad V(0) = 0: stays forever
    auto tr0 = flow(spec, origin, 10.0, opt);
    CHECK_FALSE(tr0.escaped);
    CHECK(std::abs(tr0.samples.back().x[0]) < 1e-12);
}

TEST_CASE("energy conservation at the default step") {
    for (const char* name : {"gauss1d", "gauss2d_radial", "gauss2d_aniso"}) {
        auto spec = builtin_potential(name);
        PhasePoint z;
        z.x = {0.2, spec.dim == 2 ? 0.1 : 0.0};
        z.xi = {0.6, spec.dim == 2 ? 0.3 : 0.0};
        FlowOptions opt;  // default dt
        opt.r_escape = 1e9;
        opt.record_samples = false;
        auto tr = flow(spec, z, 50.0, opt);
        CHECK(tr.energy_drift <= 1e-8);
    }
}

TEST_CASE("time reversibility") {
    auto spec = builtin_potential("gauss2d_aniso");
    PhasePoint z;
    z.x = {0.15, -0.2};
    z.xi = {0.4, 0.55};
    FlowOptions opt;
    opt.dt = 1e-4;
    opt.r_escape = 1e9;
    auto fwd = flow(spec, z, 7.0, opt);
    PhasePoint end = fwd.samples.back();
    auto back = flow(spec, end, -7.0, opt);
    PhasePoint ret = back.samples.back();
    double err = std::hypot(ret.x[0] - z.x[0], ret.x[1] - z.x[1]) +
                 std::hypot(ret.xi[0] - z.xi[0], ret.xi[1] - z.xi[1]);
    CHECK(err < 1e-6);
}

TEST_CASE("momentum reflection is time reversal") {
    auto spec = builtin_potential("gauss1d");
    PhasePoint z;
    z.x = {0.9, 0.0};
    z.xi = {0.5, 0.0};
    FlowOptions opt;
    opt.dt = 1e-4;
    opt.r_escape = 1e9;
    auto fwd = flow(spec, z, 3.0, opt);
    PhasePoint zr;
    zr.x = z.x;
    zr.xi = {-z.xi[0], 0.0};
    auto rev = flow(spec, zr, 3.0, opt);
    // trajectory of (x, -xi) equals the time reversal of (x, xi)
    auto bwd = flow(spec, z, -3.0, opt);
    REQUIRE(rev.samples.size() == bwd.samples.size());
    for (std::size_t i = 0; i < rev.samples.size(); i += 9) {
        CHECK(rev.samples[i].x[0] ==
              doctest::Approx(bwd.samples[i].x[0]).epsilon(1e-9));
        CHECK(rev.samples[i].xi[0] ==
              doctest::Approx(-bwd.samples[i].xi[0]).epsilon(1e-9));
    }
}

TEST_CASE("non-trapping verdicts") {
    SUBCASE("gauss1d passes") {
        auto spec = builtin_potential("gauss1d");
        auto decomp = classify_sublevel(spec, 512, 8.0);
        auto res = non_trapping_check(spec, decomp, 48, 60.0, 6.0, 7u);
        CHECK(res.pass);
        CHECK(res.escaped_count == 2 * res.sampled);
    }
    SUBCASE("gauss2d_radial passes") {
        auto spec = builtin_potential("gauss2d_radial");
        auto decomp = classify_sublevel(spec, 128, 8.0);
        auto res = non_trapping_check(spec, decomp, 32, 60.0, 6.0, 7u);
        CHECK(res.pass);
    }
    SUBCASE("engineered ring trap fails") {
        auto spec = make_potential("ring_trap");
        // the designed circular orbit never escapes
        PhasePoint z;
        z.x = {3.0, 0.0};
        z.xi = {0.0, std::sqrt(0.2)};
        FlowOptions opt;
        opt.dt = 1e-3;
        opt.r_escape = 12.0;
        opt.record_samples = false;
        auto tr = flow(spec, z, 80.0, opt);
        CHECK_FALSE(tr.escaped);
        CHECK(tr.energy_drift < 1e-4);

        auto decomp = classify_sublevel(spec, 256, 10.0);
        auto res = non_trapping_check(spec, decomp, 512, 80.0, 12.0, 7u);
        CHECK_FALSE(res.pass);
        CHECK_FALSE(res.worst.escaped);
    }
}

TEST_CASE("flow-out set") {
    auto spec = builtin_potential("gauss1d");
    const double xb = oracles::gauss1d_xb();
    std::vector<std::array<double, 2>> t1 = {{-xb, 0.0}, {xb, 0.0}};
    SUBCASE("T=0 gives T1 back") {
        auto a = flow_out_set(spec, t1, 0.0);
        REQUIRE(a.size() == 2);
        CHECK(a[0][0] == doctest::Approx(-xb));
        CHECK(a[1][0] == doctest::Approx(xb));
    }
    SUBCASE("outward rays are reached") {
        auto a = flow_out_set(spec, t1, 30.0);
        double lo = 0.0, hi = 0.0;
        for (const auto& p : a) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        CHECK(hi > 6.0);
        CHECK(lo < -6.0);
    }
    CHECK_THROWS(flow_out_set(spec, {}, 1.0));
}

TEST_CASE("coverage: 1D short-circuit and 2D monotonicity") {
    SUBCASE("1D passes with fraction exactly 1") {
        auto spec = builtin_potential("gauss1d");
        auto decomp = classify_sublevel(spec, 512, 8.0);
        CoverageOptions opt;
        auto rep = nd_coverage_check(spec, decomp, {{0.38, 0.0}}, opt);
        CHECK(rep.fraction == 1.0);
    }
    SUBCASE("2D: zero horizon covers almost nothing; fraction grows with T") {
        auto spec = builtin_potential("gauss2d_radial");
        auto decomp = classify_sublevel(spec, 128, 8.0);
        const double xa = oracles::gauss1d_xa();
        std::vector<std::array<double, 2>> seeds;
        for (int k = 0; k < 16; ++k) {
            double ang = 2.0 * M_PI * k / 16.0;
            seeds.push_back({xa * std::cos(ang), xa * std::sin(ang)});
        }
        CoverageOptions opt;
        opt.seeds_per_point = 12;
        opt.cells_x = 24;
        opt.cells_xi = 16;
        opt.T_max = 1e-9;  // effectively no flow
        auto rep0 = nd_coverage_check(spec, decomp, seeds, opt);
        CHECK(rep0.fraction < 0.5);
        opt.T_max = 8.0;
        auto rep1 = nd_coverage_check(spec, decomp, seeds, opt);
        CHECK(rep1.fraction >= rep0.fraction);
        opt.T_max = 16.0;
        auto rep2 = nd_coverage_check(spec, decomp, seeds, opt);
        CHECK(rep2.fraction >= rep1.fraction);
        // monotone in r_w by nested dyadic seeding
        CoverageOptions half = opt;
        half.r_w = 0.5 * opt.r_w;
        auto reph = nd_coverage_check(spec, decomp, seeds, half);
        CHECK(rep2.fraction >= reph.fraction);
    }
    SUBCASE("empty seeds") {
        auto spec = builtin_potential("gauss2d_radial");
        auto decomp = classify_sublevel(spec, 128, 8.0);
        CHECK_THROWS(nd_coverage_check(spec, decomp, {}, CoverageOptions{}));
    }
}
