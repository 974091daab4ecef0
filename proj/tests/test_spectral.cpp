#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reslab/spectral.hpp"

using namespace reslab;

namespace {

PotentialSpec zero_potential() {
    PotentialSpec s;
    s.name = "zero";
    s.dim = 1;
    s.level = 1.0;
    s.far_radius = 0.1;
    s.value = [](const double*) { return 0.0; };
    s.gradient = [](const double*, double* g) { g[0] = 0.0; };
    s.value_c = [](const Complex*) { return Complex(0.0); };
    return s;
}

PotentialSpec sea_potential() {  // V == -1 everywhere
    return make_potential("const1d");
}

}  // namespace

TEST_CASE("shift-invert arnoldi reproduces closed-form FD eigenvalues") {
    auto spec = zero_potential();
    const int n = 5000;  // forces the sparse path
    Grid grid{1, n, M_PI / 2.0};
    auto op = assemble_plain(spec, grid, 1.0);
    auto pairs = eigs_near(op, Complex(1.0, 0.0), 3);
    REQUIRE(pairs.size() == 3);
    // modes nearest 1.0 are k = 1, 2, 3 in some order; check the nearest
    double target = oracles::fd_laplacian_eig(M_PI, n, 1);
    CHECK(std::abs(pairs[0].value.real() - target) < 1e-10);
    CHECK(std::abs(pairs[0].value.imag()) < 1e-12);
    for (const auto& p : pairs) CHECK(p.residual < 1e-8);
}

TEST_CASE("dense fallback agrees with the sparse path") {
    auto spec = builtin_potential("gauss1d");
    Grid small{1, 900, 8.0};   // dense
    Grid large{1, 4500, 8.0};  // sparse
    auto od = assemble_plain(spec, small, 0.5);
    auto os = assemble_plain(spec, large, 0.5);
    auto pd = eigs_near(od, Complex(0.19, 0.0), 1);
    auto ps = eigs_near(os, Complex(0.19, 0.0), 1);
    CHECK(std::abs(pd[0].value - ps[0].value) < 1e-5);
}

TEST_CASE("filled operator eigenvalues are real") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 1024, 8.0);
    Grid grid{1, 6000, 8.0};
    auto op = assemble_filled(spec, grid, 0.5, FilledWellSpec{}, decomp);
    auto pairs = eigs_near(op, Complex(0.0), 4);
    for (const auto& p : pairs) CHECK(std::abs(p.value.imag()) < 1e-12);
}

TEST_CASE("tilde spectrum at h = 0.4 selects a level near zero") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 1024, 8.0);
    Grid grid{1, 8192, 8.0};
    auto filled = assemble_filled(spec, grid, 0.4, FilledWellSpec{}, decomp);
    auto ts = tilde_spectrum(filled, 0.4, -0.2, 0.2);
    CHECK(std::abs(ts.selected) < 0.02);
    CHECK(ts.gap > 0.1);
    CHECK(ts.gap_ok);
    REQUIRE(ts.in_window.size() >= 1);

    // window excluding every eigenvalue errors out
    CHECK_THROWS(tilde_spectrum(filled, 0.4, 0.3, 0.4));
}

TEST_CASE("distorted spectrum: resonance with negative imaginary part") {
    auto spec = builtin_potential("gauss1d");
    Grid grid{1, 8192, 8.0};
    DistortionProfile prof{0.3, 3.0, 5.0};
    auto op = assemble_distorted(spec, grid, 0.4, prof);
    auto pairs = eigs_near(op, Complex(0.0), 8);
    // the resonance is the eigenvalue nearest 0 on this benchmark
    const auto& rho = pairs[0].value;
    CHECK(rho.imag() < 0.0);
    CHECK(rho.imag() > -0.05);
    CHECK(std::abs(rho.real()) < 0.05);
    CHECK(pairs[0].residual < 1e-8);
}

TEST_CASE("free sea: rotated continuum and no resonances") {
    auto spec = sea_potential();
    Grid grid{1, 700, 8.0};  // dense path gives the full spectrum context
    DistortionProfile prof{0.3, 3.0, 5.0};
    auto op = assemble_distorted(spec, grid, 0.4, prof);
    auto pairs = eigs_near(op, Complex(-0.5, -0.3), 40);
    int counted = 0, close = 0;
    std::vector<double> args;
    for (const auto& p : pairs) {
        Complex shifted = p.value + spec.level;
        double r = std::abs(shifted);
        if (r < 0.05 || r > 1.5) continue;
        ++counted;
        args.push_back(std::arg(shifted));
        if (std::abs(std::arg(shifted) + 2.0 * prof.theta) < 0.05) ++close;
    }
    REQUIRE(counted > 10);
    CHECK(close >= counted * 9 / 10);
}

TEST_CASE("selection keeps the stable resonance and rejects the continuum") {
    auto spec = builtin_potential("gauss1d");
    const double h = 0.4;
    const int n = 8192;
    DistortionProfile prof{0.3, 3.0, 5.0};
    auto values = [&](const Grid& g, double theta) {
        DistortionProfile p2 = prof;
        p2.theta = theta;
        auto pairs = eigs_near(assemble_distorted(spec, g, h, p2), Complex(0.0), 8);
        std::vector<Complex> v;
        for (const auto& p : pairs) v.push_back(p.value);
        return v;
    };
    Grid grid{1, n, 8.0};
    auto base = eigs_near(assemble_distorted(spec, grid, h, prof), Complex(0.0), 8);
    auto run_t = values(grid, 1.2 * prof.theta);
    auto run_g = values(Grid{1, 2 * n, 8.0}, prof.theta);
    auto run_b = values(Grid{1, (n * 10) / 8, 10.0}, prof.theta);

    SelectionParams sp;
    sp.level = spec.level;
    sp.theta = prof.theta;
    sp.h = h;
    sp.grid_dx = grid.dx();
    auto sel = select_resonances(base, run_t, run_g, run_b, sp);
    REQUIRE(sel.accepted.size() == 1);
    CHECK(sel.accepted[0].rho.imag() < 0.0);
    CHECK(sel.accepted[0].rho.imag() >= -1e-2);
    CHECK(sel.accepted[0].drift.theta < sel.stab_tol);
    // continuum rejects carry big theta drifts
    int big = 0;
    for (const auto& [z, d] : sel.rejected)
        if (d > 10.0 * sel.stab_tol) ++big;
    CHECK(big > 0);

    // theta = 0: no sector opens, nothing accepted
    SelectionParams sp0 = sp;
    sp0.theta = 0.0;
    auto sel0 = select_resonances(base, run_t, run_g, run_b, sp0);
    CHECK(sel0.accepted.empty());
}

TEST_CASE("shooting agrees with the matrix route") {
    auto spec = builtin_potential("gauss1d");
    const double h = 0.4;
    Grid grid{1, 16384, 8.0};
    auto op = assemble_distorted(spec, grid, h, DistortionProfile{0.3, 3.0, 5.0});
    auto rho_m = eigs_near(op, Complex(0.0), 1)[0].value;

    ShootingOptions so;
    so.n_points = 16385;
    auto sh = shooting_resonance_1d(spec, h, rho_m, so);
    CHECK(std::abs(sh.rho - rho_m) <= 1e-6 * std::abs(rho_m + spec.level));
    CHECK(sh.rho.imag() < 0.0);
    CHECK(sh.wronskian_rel < 1e-12);

    // invariance under R_out and matching-point changes
    ShootingOptions so2 = so;
    so2.r_out = 9.0;
    so2.n_points = 18433;
    auto sh2 = shooting_resonance_1d(spec, h, rho_m, so2);
    CHECK(std::abs(sh2.rho - sh.rho) < 1e-8);
    ShootingOptions so3 = so;
    so3.x_match = 0.11;
    auto sh3 = shooting_resonance_1d(spec, h, rho_m, so3);
    CHECK(std::abs(sh3.rho - sh.rho) < 1e-8);
}

TEST_CASE("no resonance for free motion") {
    auto spec = sea_potential();
    CHECK_THROWS(shooting_resonance_1d(spec, 0.4, Complex(0.0, -1e-4)));
}

TEST_CASE("green identity for the shooting state") {
    auto spec = builtin_potential("gauss1d");
    const double h = 0.3;
    Grid grid{1, 16384, 8.0};
    auto op = assemble_distorted(spec, grid, h, DistortionProfile{0.3, 3.0, 5.0});
    // level near -0.22 at this h; take the eigenvalue nearest zero
    auto rho_m = eigs_near(op, Complex(-0.2, 0.0), 3)[0].value;
    ShootingOptions so;
    so.n_points = 16385;
    auto sh = shooting_resonance_1d(spec, h, rho_m, so);
    auto gi = green_identity_check(sh.xs, sh.u, sh.du, h, sh.rho, 2.5);
    CHECK_FALSE(gi.rhs_below_floor);
    CHECK(gi.residual < 1e-3);
    // stability under +-10% of the window radius
    auto gi_lo = green_identity_check(sh.xs, sh.u, sh.du, h, sh.rho, 2.25);
    auto gi_hi = green_identity_check(sh.xs, sh.u, sh.du, h, sh.rho, 2.75);
    CHECK(gi_lo.residual < 1e-3);
    CHECK(gi_hi.residual < 1e-3);
}

TEST_CASE("green identity degenerates to 0 = 0 for a real bound state") {
    auto spec = builtin_potential("gauss1d");
    auto decomp = classify_sublevel(spec, 1024, 8.0);
    const double h = 0.4;
    Grid grid{1, 4096, 8.0};
    auto filled = assemble_filled(spec, grid, h, FilledWellSpec{}, decomp);
    auto ts = tilde_spectrum(filled, h, -0.2, 0.2);
    // sample the eigenvector onto (xs, u, du); it is real up to roundoff
    const int n = grid.points_per_axis;
    std::vector<double> xs(n);
    std::vector<Complex> u(n), du(n);
    for (int i = 0; i < n; ++i) xs[i] = grid.coord(i);
    for (int i = 0; i < n; ++i) u[i] = ts.state[i].real();
    for (int i = 1; i + 1 < n; ++i) du[i] = (u[i + 1] - u[i - 1]) / (2 * grid.dx());
    auto gi = green_identity_check(xs, u, du, h, Complex(ts.selected, 0.0), 2.5);
    CHECK(std::abs(gi.lhs) < 1e-10 * gi.scale);
    CHECK(std::abs(gi.rhs) < 1e-10 * gi.scale);
    CHECK(gi.rhs_below_floor);
}
