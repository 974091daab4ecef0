#include <cmath>

#include "reslab/spectral.hpp"

namespace reslab {

namespace {

struct SideSolution {
    std::vector<Complex> u, du;
};

// RK4 integration of u'' = q(x) u with q = (V - rho)/h^2, from one end of
// the grid to the matching index, renormalizing to avoid overflow. The
// renormalization rescales u and du together, so Wronskian ratios are
// unaffected.
SideSolution integrate_side(const PotentialSpec& spec, double h, Complex rho,
                            const std::vector<double>& xs, int i_from, int i_to) {
    const int n = static_cast<int>(xs.size());
    SideSolution s;
    s.u.assign(n, Complex(0));
    s.du.assign(n, Complex(0));
    const int dir = (i_to > i_from) ? 1 : -1;
    const double step = (xs[1] - xs[0]) * dir;

    const Complex k = std::sqrt(rho + spec.level);
    const Complex I(0.0, 1.0);
    // Outgoing data u ~ exp(i k |x| / h): at the left end exp(-i k x / h)
    // with du = -ik/h u, at the right end exp(+i k x / h) with du = +ik/h u.
    Complex u = 1.0;
    Complex du = (dir > 0 ? -I : I) * k / h;

    auto q = [&](double x) { return (Complex(spec.value(&x)) - rho) / (h * h); };

    s.u[i_from] = u;
    s.du[i_from] = du;
    for (int i = i_from; i != i_to; i += dir) {
        double x = xs[i];
        // RK4 on (u, du)
        Complex k1u = du, k1d = q(x) * u;
        Complex k2u = du + 0.5 * step * k1d, k2d = q(x + 0.5 * step) * (u + 0.5 * step * k1u);
        Complex k3u = du + 0.5 * step * k2d, k3d = q(x + 0.5 * step) * (u + 0.5 * step * k2u);
        Complex k4u = du + step * k3d, k4d = q(x + step) * (u + step * k3u);
        u += step / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += step / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        double mag = std::abs(u) + std::abs(du);
        if (mag > 1e120) {
            double scl = 1.0 / mag;
            u *= scl;
            du *= scl;
            for (int j = i_from; j != i + dir; j += dir) {
                s.u[j] *= scl;
                s.du[j] *= scl;
            }
        }
        s.u[i + dir] = u;
        s.du[i + dir] = du;
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
            throw std::runtime_error("shooting: non-finite state during integration");
    }
    return s;
}

}  // namespace

ShootingResult shooting_resonance_1d(const PotentialSpec& spec, double h,
                                     Complex rho_guess, const ShootingOptions& opts) {
    if (spec.dim != 1)
        throw std::invalid_argument("shooting_resonance_1d: requires a 1D potential");
    const int n = opts.n_points | 1;  // odd
    std::vector<double> xs(n);
    const double dx = 2.0 * opts.r_out / (n - 1);
    for (int i = 0; i < n; ++i) xs[i] = -opts.r_out + i * dx;
    int im = static_cast<int>(std::llround((opts.x_match + opts.r_out) / dx));
    im = std::max(1, std::min(n - 2, im));

    auto wronskian = [&](Complex rho, SideSolution* keepL = nullptr,
                         SideSolution* keepR = nullptr) {
        SideSolution L = integrate_side(spec, h, rho, xs, 0, im);
        SideSolution R = integrate_side(spec, h, rho, xs, n - 1, im);
        Complex w = L.u[im] * R.du[im] - L.du[im] * R.u[im];
        double scale = std::abs(L.u[im] * R.du[im]) + std::abs(L.du[im] * R.u[im]) + 1e-300;
        if (keepL) *keepL = std::move(L);
        if (keepR) *keepR = std::move(R);
        return w / scale;
    };

    Complex r0 = rho_guess;
    Complex r1 = rho_guess + std::max(1e-9, 1e-7 * std::abs(rho_guess + spec.level)) *
                                 Complex(1.0, 0.37);
    Complex w0 = wronskian(r0);
    Complex w1 = wronskian(r1);
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        if (std::abs(w1) < opts.tol) break;
        Complex denom = w1 - w0;
        if (std::abs(denom) < 1e-300)
            throw std::runtime_error("shooting: secant iteration degenerate");
        Complex r2 = r1 - w1 * (r1 - r0) / denom;
        if (!std::isfinite(r2.real()) || std::abs(r2 - rho_guess) > 0.5)
            throw std::runtime_error("shooting: secant diverged (guess too far)");
        r0 = r1;
        w0 = w1;
        r1 = r2;
        w1 = wronskian(r1);
    }
    if (std::abs(w1) >= opts.tol)
        throw std::runtime_error("shooting: did not converge");

    ShootingResult res;
    res.rho = r1;
    res.iterations = it;
    res.wronskian_rel = std::abs(w1);
    res.xs = xs;
    SideSolution L, R;
    wronskian(r1, &L, &R);
    res.u.assign(n, Complex(0));
    res.du.assign(n, Complex(0));
    const Complex sl = 1.0 / L.u[im], sr = 1.0 / R.u[im];
    for (int i = 0; i <= im; ++i) {
        res.u[i] = L.u[i] * sl;
        res.du[i] = L.du[i] * sl;
    }
    for (int i = im; i < n; ++i) {
        res.u[i] = R.u[i] * sr;
        res.du[i] = R.du[i] * sr;
    }
    return res;
}

GreenIdentityResult green_identity_check(const std::vector<double>& xs,
                                         const std::vector<Complex>& u,
                                         const std::vector<Complex>& du,
                                         double h, Complex rho, double omega_radius) {
    const int n = static_cast<int>(xs.size());
    const double dx = xs[1] - xs[0];
    int iR = -1;
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(xs[i] - omega_radius);
        if (d < best) {
            best = d;
            iR = i;
        }
    }
    int iL = -1;
    best = 1e300;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(xs[i] + omega_radius);
        if (d < best) {
            best = d;
            iL = i;
        }
    }
    if (iL >= iR) throw std::invalid_argument("green_identity_check: bad omega radius");

    double norm2 = 0.0;
    for (int i = iL; i <= iR; ++i) {
        double w = (i == iL || i == iR) ? 0.5 : 1.0;
        norm2 += w * std::norm(u[i]) * dx;
    }
    GreenIdentityResult out;
    out.lhs = rho.imag() * norm2;
    out.rhs = -h * h *
              (std::imag(du[iR] * std::conj(u[iR])) - std::imag(du[iL] * std::conj(u[iL])));
    out.scale = h * h * (std::abs(du[iR] * u[iR]) + std::abs(du[iL] * u[iL])) + 1e-300;
    out.rhs_below_floor = std::abs(out.rhs) < 1e-13 * out.scale;
    out.residual = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-13 * out.scale);
    return out;
}

}  // namespace reslab
