#pragma once

#include <array>

#include "sewald/domain.h"

namespace sewald {

// Uniform grid covering the primary cell, padded in the free directions so
// the window support and the screening tail fit. Periodic cell lengths must
// be integer multiples of the spacing; the first axis pins it.
struct GridSpec {
    int d = 3;
    double h = 0.0;
    std::array<int, 3> M{};     // subintervals across the primary cell
    std::array<int, 3> M_ext{}; // subintervals across the extended box (= M on periodic axes)
    Vec3 L{};
    Vec3 L_ext{};               // h * M_ext on free axes, = L on periodic axes
    Vec3 pad{};                 // L_ext - L
    int f_m = 4;

    double kinf() const;        // largest resolved wavenumber, pi / h
};

// Zero-padding factors for the free-direction transforms, by mode class:
// the zero periodic mode gets s0, modes within the k_star thresholds get
// s_star, the rest run unpadded.
struct UpsamplingPlan {
    double s0 = 1.0;
    double s_star = 1.0;
    std::array<int, 3> k_star{}; // per periodic axis: |k_i| <= 2 pi k_star_i / L_i
    double s0_raw = 1.0;        // values before rounding to grid-compatible factors
    double s_star_raw = 1.0;
};

// Rounds the cell grid to even multiples of f_m and sizes the padding from
// the window support P, scaled up for slowly decaying screening tails.
GridSpec build_grid(const Cell& cell, int d, double h_target, int P, Kernel kind, int f_m);

} // namespace sewald
