#pragma once

#include <array>

namespace sewald {

struct QuadratureConfig {
    double rel_tol = 1e-13;
    int max_subdivisions = 200;
};

double erf(double x);
double erfc(double x);

namespace detail {
// Rational-approximation fallback used when platform math is unavailable;
// kept callable so tests can compare it against the primary path.
double erf_rational(double x);
double erfc_rational(double x);
} // namespace detail

// Bessel J of order 0 or 1.
double bessel_J(int order, double t);

double bessel_I0(double t);
double bessel_K1(double t);

// One-argument modified Bessel K of integer order, for identity checks.
double bessel_Kn(int order, double t);

// E_nu(a) = int_1^inf e^{-a t} t^{-nu} dt, order >= 1, a > 0.
double exp_integral_E(int order, double a);

// K_nu(a,b) = int_1^inf e^{-a t - b/t} t^{-(nu+1)} dt.
// Requires a,b >= 0, not both zero, and a > 0 whenever nu <= 0.
double incomplete_bessel_K(int order, double a, double b, const QuadratureConfig& cfg = {});

// {K_{-1}, K_0, K_1, K_2}(a,b) sharing one set of integrand evaluations.
std::array<double, 4> incomplete_bessel_K_batch(double a, double b, const QuadratureConfig& cfg = {});

// Principal branch of w e^w = t, defined for t >= -1/e.
double lambert_w0(double t);

// e^{log_scale} * erfc(z), stable when the factors over/underflow separately.
double exp_times_erfc(double log_scale, double z);

} // namespace sewald
