#include "sewald/specfun.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_expint.h>

namespace sewald {

namespace {

const int g_gsl_handler_off = [] {
    gsl_set_error_handler_off();
    return 0;
}();

} // namespace

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

namespace detail {

// Rational Chebyshev fits in three regimes, good to a few ulps.
double erfc_rational(double x) {
    static constexpr double A[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                                    3.77485237685302021e2, 3.20937758913846947e3,
                                    1.85777706184603153e-1};
    static constexpr double B[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                                    1.28261652607737228e3, 2.84423683343917062e3};
    static constexpr double C[9] = {5.64188496988670089e-1, 8.88314979438837594e0,
                                    6.61191906371416295e1,  2.98635138197400131e2,
                                    8.81952221241769090e2,  1.71204761263407058e3,
                                    2.05107837782607147e3,  1.23033935479799725e3,
                                    2.15311535474403846e-8};
    static constexpr double D[8] = {1.57449261107098347e1, 1.17693950891312499e2,
                                    5.37181101862009858e2, 1.62138957456669019e3,
                                    3.29079923573345963e3, 4.36261909014324716e3,
                                    3.43936767414372164e3, 1.23033935480374942e3};
    static constexpr double P[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                    1.25781726111229246e-1, 1.60837851487422766e-2,
                                    6.58749161529837803e-4, 1.63153871373020978e-2};
    static constexpr double Q[5] = {2.56852019228982242e0, 1.87295284992346047e0,
                                    5.27905102951428412e-1, 6.05183413124413191e-2,
                                    2.33520497626869185e-3};
    static constexpr double inv_sqrt_pi = 0.56418958354775628695;

    const double y = std::fabs(x);
    double result;
    if (y <= 0.46875) {
        const double z = y * y;
        double num = A[4] * z;
        double den = z;
        for (int i = 0; i < 3; ++i) {
            num = (num + A[i]) * z;
            den = (den + B[i]) * z;
        }
        return 1.0 - x * (num + A[3]) / (den + B[3]);
    }
    if (y <= 4.0) {
        double num = C[8] * y;
        double den = y;
        for (int i = 0; i < 7; ++i) {
            num = (num + C[i]) * y;
            den = (den + D[i]) * y;
        }
        result = (num + C[7]) / (den + D[7]);
    } else if (y < 26.6) {
        const double z = 1.0 / (y * y);
        double num = P[5] * z;
        double den = z;
        for (int i = 0; i < 4; ++i) {
            num = (num + P[i]) * z;
            den = (den + Q[i]) * z;
        }
        result = z * (num + P[4]) / (den + Q[4]);
        result = (inv_sqrt_pi - result) / y;
    } else {
        result = 0.0;
    }
    // exp(-y^2) split so the small half carries the rounding.
    const double ysq = std::floor(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    result *= std::exp(-ysq * ysq) * std::exp(-del);
    return x < 0.0 ? 2.0 - result : result;
}

double erf_rational(double x) {
    if (std::fabs(x) <= 0.46875) return 1.0 - erfc_rational(x);
    // At larger |x| the complement is small; subtracting keeps full accuracy.
    return x > 0.0 ? 1.0 - erfc_rational(x) : erfc_rational(-x) - 1.0;
}

} // namespace detail

double bessel_J(int order, double t) {
    if (order == 0) return gsl_sf_bessel_J0(t);
    if (order == 1) return gsl_sf_bessel_J1(t);
    throw std::invalid_argument("bessel_J supports orders 0 and 1");
}

double bessel_I0(double t) { return gsl_sf_bessel_I0(t); }

double bessel_K1(double t) {
    if (!(t > 0.0)) throw std::domain_error("bessel_K1 requires t > 0");
    return gsl_sf_bessel_K1(t);
}

double bessel_Kn(int order, double t) {
    if (!(t > 0.0)) throw std::domain_error("bessel_Kn requires t > 0");
    return gsl_sf_bessel_Kn(order, t);
}

double exp_integral_E(int order, double a) {
    if (order < 1) throw std::invalid_argument("exp_integral_E requires order >= 1");
    if (!(a > 0.0)) throw std::domain_error("exp_integral_E requires a > 0");
    return gsl_sf_expint_En(order, a);
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1].
constexpr double kGK15Nodes[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};
constexpr double kGK15Weights[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};
constexpr double kG7Weights[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

// After the substitution u = 1/t the integrand on (0,1] is
// e^{-a/u - b u} u^{nu-1}; Eval fills values for each requested order at u.
template <int N, typename Eval>
struct GK15Rule {
    Eval eval;

    void apply(double lo, double hi, std::array<double, N>& integral,
               std::array<double, N>& error) const {
        const double c = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        std::array<double, N> sum_k{}, sum_g{};
        std::array<double, N> v{};
        for (int i = 0; i < 8; ++i) {
            const int reps = (i == 7) ? 1 : 2;
            for (int s = 0; s < reps; ++s) {
                const double u = c + (s == 0 ? half : -half) * kGK15Nodes[i];
                eval(u, v);
                for (int n = 0; n < N; ++n) sum_k[n] += kGK15Weights[i] * v[n];
                if (i % 2 == 1) {
                    for (int n = 0; n < N; ++n) sum_g[n] += kG7Weights[i / 2] * v[n];
                } else if (i == 7) {
                    for (int n = 0; n < N; ++n) sum_g[n] += kG7Weights[3] * v[n];
                }
            }
        }
        for (int n = 0; n < N; ++n) {
            integral[n] = half * sum_k[n];
            error[n] = std::fabs(half * (sum_k[n] - sum_g[n]));
        }
    }
};

template <int N, typename Eval>
std::array<double, N> adaptive_gk15(double lo, double hi, Eval eval,
                                    const QuadratureConfig& cfg) {
    if (!(cfg.rel_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
    struct Segment {
        double lo, hi, errmax;
        std::array<double, N> val, err;
    };
    GK15Rule<N, Eval> rule{eval};
    auto make = [&rule](double a, double b) {
        Segment s{a, b, 0.0, {}, {}};
        rule.apply(a, b, s.val, s.err);
        for (int n = 0; n < N; ++n) s.errmax = std::max(s.errmax, s.err[n]);
        return s;
    };
    std::vector<Segment> segs;
    segs.push_back(make(lo, hi));
    const int max_segs = std::max(cfg.max_subdivisions, 1);
    while (static_cast<int>(segs.size()) < max_segs) {
        std::array<double, N> total{}, toterr{};
        for (const Segment& s : segs)
            for (int n = 0; n < N; ++n) {
                total[n] += s.val[n];
                toterr[n] += s.err[n];
            }
        bool ok = true;
        for (int n = 0; n < N; ++n)
            if (toterr[n] > cfg.rel_tol * std::max(std::fabs(total[n]), 1e-300)) ok = false;
        if (ok) break;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].errmax > segs[worst].errmax) worst = i;
        const double a = segs[worst].lo, b = segs[worst].hi;
        const double m = 0.5 * (a + b);
        segs[worst] = make(a, m);
        segs.push_back(make(m, b));
    }
    std::array<double, N> total{};
    for (const Segment& s : segs)
        for (int n = 0; n < N; ++n) total[n] += s.val[n];
    return total;
}

double exp_integral_E0(double a) { return std::exp(-a) / a; }

void check_incomplete_bessel_args(int order, double a, double b) {
    if (a < 0.0 || b < 0.0) throw std::domain_error("incomplete_bessel_K requires a,b >= 0");
    if (a == 0.0 && b == 0.0) throw std::domain_error("incomplete_bessel_K requires a or b positive");
    if (a == 0.0 && order <= 0) throw std::domain_error("incomplete_bessel_K diverges for a=0, order<=0");
}

double lower_cut(double a, double b) {
    return a > 0.0 ? a / (a + b + 60.0) : 0.0;
}

} // namespace

double incomplete_bessel_K(int order, double a, double b, const QuadratureConfig& cfg) {
    check_incomplete_bessel_args(order, a, b);
    if (b == 0.0) {
        if (order + 1 == 0) return exp_integral_E0(a);
        if (order + 1 >= 1) return exp_integral_E(order + 1, a);
        // order <= -2 with b = 0: integrate t^{|order|-1} e^{-at} directly.
    }
    auto eval = [=](double u, std::array<double, 1>& v) {
        v[0] = std::exp(-a / u - b * u) * std::pow(u, order - 1);
    };
    return adaptive_gk15<1>(lower_cut(a, b), 1.0, eval, cfg)[0];
}

std::array<double, 4> incomplete_bessel_K_batch(double a, double b, const QuadratureConfig& cfg) {
    check_incomplete_bessel_args(-1, a, b);
    if (b == 0.0)
        return {exp_integral_E0(a), exp_integral_E(1, a), exp_integral_E(2, a),
                exp_integral_E(3, a)};
    auto eval = [=](double u, std::array<double, 4>& v) {
        const double w = std::exp(-a / u - b * u);
        const double inv = 1.0 / u;
        v[0] = w * inv * inv;
        v[1] = w * inv;
        v[2] = w;
        v[3] = w * u;
    };
    return adaptive_gk15<4>(lower_cut(a, b), 1.0, eval, cfg);
}

double lambert_w0(double t) {
    static const double inv_e = std::exp(-1.0);
    if (t < -inv_e - 1e-15) throw std::domain_error("lambert_w0 requires t >= -1/e");
    if (t == 0.0) return 0.0;
    double w;
    if (t < -0.32) {
        const double p = std::sqrt(std::max(2.0 * (std::exp(1.0) * t + 1.0), 0.0));
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
        if (p < 1e-4) return w;
    } else if (t < 1.0) {
        w = t * (1.0 - t * (1.0 - 1.5 * t));
    } else {
        w = std::log(t);
        if (w > 1.0) w -= std::log(w);
    }
    for (int it = 0; it < 60; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - t;
        const double fp = ew * (w + 1.0);
        if (fp == 0.0) break;
        const double step = f / (fp - f * (w + 2.0) / (2.0 * (w + 1.0)));
        w -= step;
        if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(w))) break;
    }
    return w;
}

double exp_times_erfc(double log_scale, double z) {
    if (z < 26.0) return std::exp(log_scale) * std::erfc(z);
    const double zi = 1.0 / (z * z);
    const double series =
        1.0 + zi * (-0.5 + zi * (0.75 + zi * (-1.875 + zi * (6.5625 + zi * -29.53125))));
    return std::exp(log_scale - z * z) * series / (z * std::sqrt(M_PI));
}

} // namespace sewald
