#ifndef RESLAB_POTENTIAL_HPP
#define RESLAB_POTENTIAL_HPP

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace reslab {

using Complex = std::complex<double>;

/// Thrown when a spec-level precondition or assumption is violated.
/// `assumption` names the violated assumption when one applies (used by the
/// CLI to report exit code 2 with a named assumption).
struct AssumptionError : std::runtime_error {
    std::string assumption;
    AssumptionError(const std::string& which, const std::string& msg)
        : std::runtime_error(msg), assumption(which) {}
};

/// A potential V on R^n (n = 1 or 2) with the metadata needed by the rest of
/// the pipeline: asymptotic sea level -L, sector half-angle for the complex
/// distortion, and a radius beyond which V is within 1% of -L.
///
/// `value_c` is the holomorphic evaluation V(z) on complex arguments, needed
/// by the distorted assembly. Potentials without it are rejected there.
struct PotentialSpec {
    std::string name;
    int dim = 1;
    double level = 1.0;          // L > 0, V -> -L at infinity
    double sector_delta = 0.5;   // half-angle of the analyticity sector
    double far_radius = 3.0;     // |V + L| < 0.01 L for |x| >= far_radius

    std::function<double(const double*)> value;
    std::function<void(const double*, double*)> gradient;
    std::function<Complex(const Complex*)> value_c;  // may be empty

    double operator()(double x) const { return value(&x); }
    double operator()(double x, double y) const {
        double p[2] = {x, y};
        return value(p);
    }
    bool has_complex_eval() const { return static_cast<bool>(value_c); }
};

/// The three benchmark potentials. Throws std::invalid_argument on an
/// unknown name.
///   gauss1d:        V(x)   = 8 x^2 exp(-x^2) - 1
///   gauss2d_radial: V(x)   = 8 |x|^2 exp(-|x|^2) - 1
///   gauss2d_aniso:  V(x,y) = 8 (x^2 + 0.8 y^2) exp(-x^2-y^2) - 1
PotentialSpec builtin_potential(const std::string& name);

/// Superset of builtin_potential used by tests and configs. Adds synthetic
/// potentials:
///   const1d / const2d : V = c (default -1), free motion
///   ring_trap         : gauss2d_radial plus a sea-side ring valley holding a
///                       stable circular orbit at energy 0 (non-trapping
///                       counterexample)
PotentialSpec make_potential(const std::string& name);

/// Scales the barrier: V -> s^2 * V where V > 0, V unchanged where V <= 0.
/// Used by the metric-scaling checks (s = 2 gives 4V on the barrier).
PotentialSpec scale_barrier(const PotentialSpec& spec, double s);

}  // namespace reslab

#endif
