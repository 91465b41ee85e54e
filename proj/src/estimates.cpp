#include "sewald/estimates.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "sewald/modified_kernels.h"
#include "sewald/specfun.h"

namespace sewald {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// Both truncation error estimates have the shape c * x^a * e^{-b x^2}.
struct DecayForm {
    double c, a, b;

    double eval(double x) const { return c * std::pow(x, a) * std::exp(-b * x * x); }
    double log_residual(double x, double log_tau) const {
        return std::log(c) + a * std::log(x) - b * x * x - log_tau;
    }
};

DecayForm fourier_form(Kernel kind, double xi, double L, double Q) {
    double b = 1.0 / (4.0 * xi * xi);
    switch (kind) {
        case Kernel::stokeslet: return {4.0 / (kPi * L) * std::sqrt(Q / 3.0), 0.0, b};
        case Kernel::stresslet: return {4.0 / (3.0 * kPi * L) * std::sqrt(3.5 * Q), 1.0, b};
        case Kernel::rotlet: return {std::sqrt(8.0 * xi * xi * Q / (3.0 * kPi * L * L * L)), -0.5, b};
    }
    throw std::invalid_argument("unknown kernel");
}

DecayForm realspace_form(Kernel kind, double xi, double L, double Q) {
    double b = xi * xi;
    double L3 = L * L * L;
    switch (kind) {
        case Kernel::stokeslet: return {std::sqrt(4.0 * Q / L3), 0.5, b};
        case Kernel::stresslet: return {std::sqrt(112.0 * Q * b * b / (9.0 * L3)), 1.5, b};
        case Kernel::rotlet: return {std::sqrt(8.0 * Q / (3.0 * L3)), -0.5, b};
    }
    throw std::invalid_argument("unknown kernel");
}

// Smallest x on the decaying branch with f(x) <= tau. floor_value is returned
// (flagged) when the form never exceeds tau there.
CutoffResult decay_solve(const DecayForm& f, double tau, double floor_value) {
    double log_tau = std::log(tau);
    double lo;
    if (f.a > 0.0) {
        lo = std::sqrt(f.a / (2.0 * f.b)); // stationary point
        if (f.eval(lo) <= tau) return {lo, true};
    } else if (f.a == 0.0) {
        if (f.c <= tau) return {floor_value, true};
        return {std::sqrt(std::log(f.c / tau) / f.b), false};
    } else {
        lo = 1e-14; // grows without bound toward the origin
        if (f.log_residual(lo, log_tau) <= 0.0) return {lo, true};
    }

    double hi = std::max(2.0 * lo, 1.0 / std::sqrt(f.b));
    for (int guard = 0; f.log_residual(hi, log_tau) > 0.0; ++guard) {
        hi *= 2.0;
        if (guard > 200) throw std::runtime_error("cutoff bracket expansion failed");
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double g = f.log_residual(x, log_tau);
        if (std::abs(g) < 1e-14) break;
        if (g > 0.0) lo = x; else hi = x;
        double slope = f.a / x - 2.0 * f.b * x;
        double step = x - g / slope;
        x = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
    }
    return {x, false};
}

// Valid upsampling factors make every free-direction padded size a multiple
// of f_m; round s up to the nearest one.
double raise_factor(double s, const GridSpec& grid) {
    long g = 0;
    for (int i = grid.d; i < 3; ++i) {
        if (grid.M_ext[i] % grid.f_m != 0)
            throw std::invalid_argument("extended grid sizes must be multiples of f_m");
        g = std::gcd(g, static_cast<long>(grid.M_ext[i] / grid.f_m));
    }
    if (g == 0) return std::max(s, 1.0);
    double adjusted = std::ceil(s * static_cast<double>(g) - 1e-9) / static_cast<double>(g);
    return std::max(adjusted, 1.0);
}

} // namespace

double fourier_trunc_error(Kernel kind, double xi, double kinf, double L, double Q) {
    require_positive(xi, "xi");
    require_positive(kinf, "kinf");
    require_positive(L, "L");
    require_positive(Q, "Q");
    return fourier_form(kind, xi, L, Q).eval(kinf);
}

double realspace_trunc_error(Kernel kind, double xi, double rc, double L, double Q) {
    require_positive(xi, "xi");
    require_positive(rc, "rc");
    require_positive(L, "L");
    require_positive(Q, "Q");
    return realspace_form(kind, xi, L, Q).eval(rc);
}

CutoffResult solve_kinf(Kernel kind, double xi, double tau, double L, double Q) {
    require_positive(xi, "xi");
    require_positive(tau, "tau");
    require_positive(L, "L");
    require_positive(Q, "Q");
    DecayForm f = fourier_form(kind, xi, L, Q);
    if (kind == Kernel::rotlet) {
        double c2 = f.c * f.c;
        return {xi * std::sqrt(lambert_w0(c2 * c2 / (xi * xi * std::pow(tau, 4.0)))), false};
    }
    return decay_solve(f, tau, 2.0 * kPi / L);
}

CutoffResult solve_rc(Kernel kind, double xi, double tau, double L, double Q) {
    require_positive(xi, "xi");
    require_positive(tau, "tau");
    require_positive(L, "L");
    require_positive(Q, "Q");
    return decay_solve(realspace_form(kind, xi, L, Q), tau, 0.0);
}

double potential_rms(Kernel kind, double L, double Q, double xi) {
    require_positive(L, "L");
    require_positive(Q, "Q");
    require_positive(xi, "xi");
    double t = xi * L;
    switch (kind) {
        case Kernel::stokeslet: {
            double fit = (1.0 + 1.323e-2 * t + 2.469e-4 * t * t) * std::exp(-5.205 / (t * t));
            return 1.8 * std::sqrt(Q) * fit / L;
        }
        case Kernel::stresslet: return 7.2 * std::sqrt(Q) * std::sqrt(t) / (L * L);
        case Kernel::rotlet: return 2.4 * std::sqrt(Q) * std::sqrt(t) * std::exp(-11.60 / (t * t)) / (L * L);
    }
    throw std::invalid_argument("unknown kernel");
}

double window_error(double P, double U) {
    require_positive(U, "U");
    if (P < 0.0) throw std::invalid_argument("P must be nonnegative");
    return 10.0 * U * std::exp(-2.5 * P);
}

WindowSizeResult solve_P(double tau, double U) {
    require_positive(tau, "tau");
    require_positive(U, "U");
    if (tau >= 10.0 * U) return {2, true};
    double P_real = std::log(10.0 * U / tau) / 2.5;
    int P = 2 * static_cast<int>(std::ceil(0.5 * P_real - 1e-9));
    return {std::max(P, 2), false};
}

std::pair<double, int> pollution_adjust(double h, int P, int d) {
    if (d < 0 || d > 3) throw std::invalid_argument("periodicity must be 0, 1, 2 or 3");
    require_positive(h, "h");
    if (d == 0) return {h / 1.1, P + 2};
    return {h / 1.05, P + 4};
}

UpsamplingPlan upsampling_params(const GridSpec& grid, double tau, double U) {
    if (grid.d < 0 || grid.d > 2)
        throw std::invalid_argument("upsampling applies only to grids with free directions");
    require_positive(tau, "tau");
    require_positive(U, "U");

    UpsamplingPlan plan;
    double R = truncation_radius(grid.L_ext, grid.d);
    double L_free_min = grid.L_ext[grid.d];
    for (int i = grid.d + 1; i < 3; ++i) L_free_min = std::min(L_free_min, grid.L_ext[i]);
    plan.s0_raw = 1.0 + R / L_free_min;
    plan.s0 = raise_factor(std::ceil(10.0 * plan.s0_raw - 1e-9) / 10.0, grid);

    if (grid.d >= 1) {
        int M_ext_min = grid.M_ext[grid.d];
        for (int i = grid.d + 1; i < 3; ++i) M_ext_min = std::min(M_ext_min, grid.M_ext[i]);
        double log_ratio = std::log(U / (2.0 * tau));
        int M_max = 0;
        for (int i = 0; i < grid.d; ++i) M_max = std::max(M_max, grid.M[i]);
        if (M_ext_min <= M_max)
            throw std::runtime_error("grid has no free-direction padding; near-axis upsampling is undefined");
        plan.s_star_raw = static_cast<double>(M_max) / M_ext_min * (1.0 + log_ratio / (2.0 * kPi));
        plan.s_star = raise_factor(std::max(plan.s_star_raw, 1.0), grid);
        for (int i = 0; i < grid.d; ++i) {
            double v = static_cast<double>(grid.M[i]) / (M_ext_min - grid.M[i]) * log_ratio / (2.0 * kPi) - 1.0;
            plan.k_star[i] = std::max(0, static_cast<int>(std::ceil(v - 1e-9)));
        }
    }
    return plan;
}

ParameterSelection select_parameters(Kernel kind, int d, const Cell& cell, double Q, double xi,
                                     const ToleranceSpec& tol, const SelectionOptions& opt) {
    if (d < 0 || d > 3) throw std::invalid_argument("periodicity must be 0, 1, 2 or 3");
    require_positive(xi, "xi");
    require_positive(Q, "Q");
    double L = std::cbrt(cell.volume());

    EstimateReport rep;
    rep.U = potential_rms(kind, L, Q, xi);
    rep.tau_abs = tol.absolute(rep.U);
    require_positive(rep.tau_abs, "tolerance");
    double tau = rep.tau_abs;

    CutoffResult rc = solve_rc(kind, xi, tau, L, Q);
    rep.rc_clamped = rc.clamped;

    CutoffResult kf = solve_kinf(kind, xi, tau, L, Q);
    rep.kinf = kf.value;
    rep.kinf_clamped = kf.clamped;
    rep.h_estimate = kPi / kf.value;

    WindowSizeResult ws = solve_P(tau, rep.U);
    rep.window_saturated = ws.saturated;
    int P_est = ws.P;
    if (opt.window == WindowKind::tg) {
        P_est = 2 * static_cast<int>(std::ceil(P_est / 1.2 - 1e-9));
        rep.tg_support_from_pkb = true;
    }
    rep.P_estimate = P_est;

    double h_target = rep.h_estimate;
    int P_target = P_est;
    if (opt.pollution_fix) std::tie(h_target, P_target) = pollution_adjust(h_target, P_target, d);
    rep.h_target = h_target;
    rep.P_target = P_target;
    int P_actual = 2 * ((P_target + 1) / 2);

    ParameterSelection out;
    EwaldParams& params = out.params;
    params.kind = kind;
    params.d = d;
    params.xi = xi;
    params.rc = rc.value;
    params.grid = build_grid(cell, d, h_target, P_actual, kind, opt.f_m);
    params.window = WindowSpec::make(opt.window, P_actual, params.grid.h);

    rep.fourier_trunc = fourier_trunc_error(kind, xi, params.grid.kinf(), L, Q);
    rep.realspace_trunc = realspace_trunc_error(kind, xi, rc.value, L, Q);
    double P_eff = opt.window == WindowKind::tg ? 0.6 * P_actual : static_cast<double>(P_actual);
    rep.window_err = window_error(P_eff, rep.U);

    if (d < 3) {
        params.R = truncation_radius(params.grid.L_ext, d);
        params.upsampling = upsampling_params(params.grid, tau, rep.U);
    }
    out.report = rep;
    return out;
}

} // namespace sewald
