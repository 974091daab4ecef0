#include "reslab/potential.hpp"

#include <cmath>

namespace reslab {

namespace {

// V(x) = a1 x1^2 a2 x2^2 ... exp(-|x|^2) - L, the gaussian barrier family.
PotentialSpec gauss_family(const std::string& name, int dim, double a1, double a2) {
    PotentialSpec s;
    s.name = name;
    s.dim = dim;
    s.level = 1.0;
    s.sector_delta = 0.5;
    s.far_radius = 3.0;
    s.value = [dim, a1, a2](const double* x) {
        double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
        double q = a1 * x[0] * x[0] + (dim == 2 ? a2 * x[1] * x[1] : 0.0);
        return q * std::exp(-r2) - 1.0;
    };
    s.gradient = [dim, a1, a2](const double* x, double* g) {
        double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
        double q = a1 * x[0] * x[0] + (dim == 2 ? a2 * x[1] * x[1] : 0.0);
        double e = std::exp(-r2);
        g[0] = (2.0 * a1 * x[0] - 2.0 * x[0] * q) * e;
        if (dim == 2) g[1] = (2.0 * a2 * x[1] - 2.0 * x[1] * q) * e;
    };
    s.value_c = [dim, a1, a2](const Complex* z) {
        Complex r2 = z[0] * z[0] + (dim == 2 ? z[1] * z[1] : Complex(0));
        Complex q = a1 * z[0] * z[0] + (dim == 2 ? a2 * z[1] * z[1] : Complex(0));
        return q * std::exp(-r2) - 1.0;
    };
    return s;
}

PotentialSpec const_potential(const std::string& name, int dim, double c) {
    PotentialSpec s;
    s.name = name;
    s.dim = dim;
    s.level = -c;  // V == c everywhere, so the "sea level" is c itself
    s.sector_delta = 1.0;
    s.far_radius = 0.1;
    s.value = [c](const double*) { return c; };
    s.gradient = [dim](const double*, double* g) {
        g[0] = 0.0;
        if (dim == 2) g[1] = 0.0;
    };
    s.value_c = [c](const Complex*) { return Complex(c); };
    return s;
}

// gauss2d_radial plus a ring valley centered at r0 = 3 shaped so that
// (r = 3, xi tangential with xi^2 = -V(3) = 0.2) is a stable circular orbit
// at energy 0: V(3) = -0.2, V'(3) = 2*0.2/3, radial stability from the
// quadratic term.
constexpr double kRing0 = 3.0;
constexpr double kRingV = -0.2;
constexpr double kRingGamma = 3.6;
constexpr double kRingWidth = 4.0;  // exp(-width (r - r0)^2)

double ring_alpha() {
    double base = 8.0 * kRing0 * kRing0 * std::exp(-kRing0 * kRing0) - 1.0;
    return kRingV - base;
}
double ring_beta() {
    double based = 16.0 * kRing0 * (1.0 - kRing0 * kRing0) * std::exp(-kRing0 * kRing0);
    return (-2.0 * kRingV / kRing0) - based;
}

PotentialSpec ring_trap_potential() {
    PotentialSpec s;
    s.name = "ring_trap";
    s.dim = 2;
    s.level = 1.0;
    s.sector_delta = 0.3;
    s.far_radius = 6.0;
    const double al = ring_alpha(), be = ring_beta(), ga = kRingGamma, w = kRingWidth;
    auto bump = [al, be, ga, w](double r) {
        double t = r - kRing0;
        return (al + be * t + ga * t * t) * std::exp(-w * t * t);
    };
    auto bumpd = [al, be, ga, w](double r) {
        double t = r - kRing0;
        double e = std::exp(-w * t * t);
        return (be + 2.0 * ga * t) * e - 2.0 * w * t * (al + be * t + ga * t * t) * e;
    };
    s.value = [bump](const double* x) {
        double r2 = x[0] * x[0] + x[1] * x[1];
        double r = std::sqrt(r2);
        return 8.0 * r2 * std::exp(-r2) - 1.0 + bump(r);
    };
    s.gradient = [bumpd](const double* x, double* g) {
        double r2 = x[0] * x[0] + x[1] * x[1];
        double r = std::sqrt(r2);
        double e = std::exp(-r2);
        double dVdr2 = 8.0 * e - 8.0 * r2 * e;  // d/d(r^2) of the base part
        double radial = (r > 1e-14) ? bumpd(r) / r : 0.0;
        g[0] = 2.0 * x[0] * dVdr2 + x[0] * radial;
        g[1] = 2.0 * x[1] * dVdr2 + x[1] * radial;
    };
    // no holomorphic evaluation (sqrt(r^2) is not entire); distorted assembly
    // rejects this potential, which is fine: it only feeds the dynamics module.
    return s;
}

}  // namespace

PotentialSpec builtin_potential(const std::string& name) {
    if (name == "gauss1d") return gauss_family(name, 1, 8.0, 0.0);
    if (name == "gauss2d_radial") return gauss_family(name, 2, 8.0, 8.0);
    if (name == "gauss2d_aniso") return gauss_family(name, 2, 8.0, 6.4);
    throw std::invalid_argument("builtin_potential: unknown name '" + name + "'");
}

PotentialSpec make_potential(const std::string& name) {
    if (name == "const1d") return const_potential(name, 1, -1.0);
    if (name == "const2d") return const_potential(name, 2, -1.0);
    if (name == "ring_trap") return ring_trap_potential();
    return builtin_potential(name);
}

PotentialSpec scale_barrier(const PotentialSpec& spec, double s) {
    PotentialSpec out = spec;
    out.name = spec.name + "_barrier_x" + std::to_string(s * s);
    auto base = spec.value;
    out.value = [base, s](const double* x) {
        double v = base(x);
        return v > 0.0 ? s * s * v : v;
    };
    auto baseg = spec.gradient;
    int dim = spec.dim;
    out.gradient = [base, baseg, s, dim](const double* x, double* g) {
        baseg(x, g);
        if (base(x) > 0.0) {
            g[0] *= s * s;
            if (dim == 2) g[1] *= s * s;
        }
    };
    out.value_c = nullptr;  // barrier clipping is not holomorphic
    return out;
}

}  // namespace reslab
