#pragma once

#include <utility>

#include "sewald/domain.h"
#include "sewald/grid.h"
#include "sewald/window.h"

namespace sewald {

// Error tolerance on the rms of the potential, absolute or relative to the
// potential magnitude U.
struct ToleranceSpec {
    double value = 1e-8;
    bool relative = false;

    double absolute(double U) const { return relative ? value * U : value; }
};

// Result of inverting a truncation error estimate for its cutoff. When the
// tolerance is met everywhere on the decaying branch, the smallest
// meaningful cutoff is returned and clamped is set.
struct CutoffResult {
    double value = 0.0;
    bool clamped = false;
};

struct WindowSizeResult {
    int P = 2;
    bool saturated = false; // tolerance at or above the whole-window error
};

// rms truncation error of the Fourier-space part summed over |k| <= kinf.
double fourier_trunc_error(Kernel kind, double xi, double kinf, double L, double Q);

// rms truncation error of the real-space part cut off at distance rc.
double realspace_trunc_error(Kernel kind, double xi, double rc, double L, double Q);

// Smallest cutoff on the decaying branch whose estimate is <= tau.
CutoffResult solve_kinf(Kernel kind, double xi, double tau, double L, double Q);
CutoffResult solve_rc(Kernel kind, double xi, double tau, double L, double Q);

// Fitted rms magnitude of the Fourier-space part of the potential.
double potential_rms(Kernel kind, double L, double Q, double xi);

// rms gridding error of a window of support P grid cells.
double window_error(double P, double U);

// Smallest even P with window_error(P, U) <= tau.
WindowSizeResult solve_P(double tau, double U);

// Shrink h and grow P so the combined gridding and truncation errors stay
// near their individual targets.
std::pair<double, int> pollution_adjust(double h, int P, int d);

// Upsampling factors and mode thresholds for a padded grid; tau is the
// absolute Fourier-part tolerance. Requires free directions (d < 3), and
// padding (M_ext > M) when d is 1 or 2.
UpsamplingPlan upsampling_params(const GridSpec& grid, double tau, double U);

// Everything needed to run the split sum at a chosen xi.
struct EwaldParams {
    Kernel kind = Kernel::stokeslet;
    int d = 3;
    double xi = 1.0;
    double rc = 0.0;
    double R = 0.0; // free-direction kernel truncation radius, 0 when d = 3
    GridSpec grid;
    WindowSpec window;
    UpsamplingPlan upsampling;
};

// Predicted error levels and the intermediate values behind a selection.
struct EstimateReport {
    double tau_abs = 0.0;
    double U = 0.0;
    double kinf = 0.0;            // solved wavenumber cutoff, pre rounding
    double fourier_trunc = 0.0;   // estimate at the final grid's pi/h
    double realspace_trunc = 0.0; // estimate at the chosen rc
    double window_err = 0.0;      // estimate at the final window size
    double h_estimate = 0.0;      // before the pollution adjustment
    int P_estimate = 0;
    double h_target = 0.0;        // after the adjustment, before grid rounding
    int P_target = 0;
    bool rc_clamped = false;
    bool kinf_clamped = false;
    bool window_saturated = false;
    bool tg_support_from_pkb = false; // truncated-Gaussian support matched to the
                                      // piecewise window's error level
};

struct SelectionOptions {
    int f_m = 4;
    WindowKind window = WindowKind::pkb;
    bool pollution_fix = true;
};

struct ParameterSelection {
    EwaldParams params;
    EstimateReport report;
};

// Turns a tolerance into a full parameter set: rc, grid, window, padding and
// upsampling, in that order. With d = 3 the padding and upsampling stages
// are skipped.
ParameterSelection select_parameters(Kernel kind, int d, const Cell& cell, double Q, double xi,
                                     const ToleranceSpec& tol, const SelectionOptions& opt = {});

} // namespace sewald
