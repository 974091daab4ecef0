// Test-only numerical oracles, independent of the library implementations
// they check: adaptive Simpson quadrature, bisection root finding, and the
// closed-form finite-difference Dirichlet Laplacian spectrum.
#ifndef RESLAB_TESTS_ORACLES_HPP
#define RESLAB_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double tol, int depth) {
    double m = 0.5 * (a + b);
    double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    double whole = (b - a) * (fa + 4 * fm + fb) / 6.0;
    double left = (m - a) * (fa + 4 * flm + fm) / 6.0;
    double right = (b - m) * (fm + 4 * frm + fb) / 6.0;
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

inline double quad(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-10) {
    double m = 0.5 * (a + b);
    return simpson_rec(f, a, b, f(a), f(m), f(b), tol, 48);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12) {
    double flo = f(lo);
    for (int i = 0; i < 200 && (hi - lo) > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((f(mid) <= 0) == (flo <= 0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// gauss1d barrier data
inline double gauss1d_v(double x) { return 8 * x * x * std::exp(-x * x) - 1.0; }

inline double gauss1d_xa() {
    return bisect([](double x) { return gauss1d_v(x); }, 0.1, 1.0);
}
inline double gauss1d_xb() {
    return bisect([](double x) { return -gauss1d_v(x); }, 1.0, 4.0);
}

// barrier action at energy E, one side
inline double gauss1d_action(double energy = 0.0, double tol = 1e-10) {
    auto vm = [energy](double x) { return gauss1d_v(x) - energy; };
    double a = bisect(vm, 0.05, 1.0);
    double b = bisect([&](double x) { return -vm(x); }, 1.0, 5.0);
    return quad([&](double x) { return std::sqrt(std::max(vm(x), 0.0)); }, a, b, tol);
}

// FD Dirichlet Laplacian eigenvalue: -u'' on (0, Lbox) with N interior points,
// mode k = 1..N: (4 / dx^2) sin^2(k pi / (2 (N+1)))
inline double fd_laplacian_eig(double box_len, int n, int k) {
    double dx = box_len / (n + 1);
    double s = std::sin(0.5 * k * M_PI / (n + 1));
    return 4.0 / (dx * dx) * s * s;
}

}  // namespace oracles

#endif
