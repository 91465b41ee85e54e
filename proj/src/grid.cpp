#include "sewald/grid.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sewald {

namespace {

double padding_scale(Kernel kind, int d) {
    if (d == 0) {
        switch (kind) {
            case Kernel::stokeslet: return 2.2;
            case Kernel::stresslet: return 2.4;
            case Kernel::rotlet: return 1.5;
        }
    }
    return 2.4;
}

int padding_floor(Kernel kind) {
    return kind == Kernel::rotlet ? 0 : 8;
}

int round_up_multiple(double x, int f) {
    double q = std::ceil(x / f - 1e-9);
    return f * static_cast<int>(q < 1.0 ? 1.0 : q);
}

} // namespace

double GridSpec::kinf() const { return std::numbers::pi / h; }

GridSpec build_grid(const Cell& cell, int d, double h_target, int P, Kernel kind, int f_m) {
    if (d < 0 || d > 3) throw std::invalid_argument("periodicity must be 0, 1, 2 or 3");
    if (!(h_target > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (P < 2 || P % 2 != 0) throw std::invalid_argument("window size must be a positive even integer");
    if (f_m < 2 || f_m % 2 != 0) throw std::invalid_argument("grid granularity must be a positive even integer");
    for (double Li : cell.L)
        if (!(Li > 0.0)) throw std::invalid_argument("cell lengths must be positive");

    GridSpec g;
    g.d = d;
    g.L = cell.L;
    g.f_m = f_m;

    g.M[0] = round_up_multiple(cell.L[0] / h_target, f_m);
    g.h = cell.L[0] / g.M[0];
    for (int i = 1; i < 3; ++i) {
        double ratio = cell.L[i] / g.h;
        if (i < d) {
            int Mi = static_cast<int>(std::llround(ratio));
            if (Mi < 2 || Mi % 2 != 0 || std::abs(ratio - Mi) > 1e-9 * ratio)
                throw std::invalid_argument("periodic cell length must be an even multiple of the grid spacing");
            g.M[i] = Mi;
        } else {
            g.M[i] = round_up_multiple(ratio, f_m);
        }
    }

    double lambda = padding_scale(kind, d);
    double theta = padding_floor(kind);
    for (int i = 0; i < 3; ++i) {
        if (i < d) {
            g.M_ext[i] = g.M[i];
            g.L_ext[i] = cell.L[i];
            g.pad[i] = 0.0;
        } else {
            double raw = cell.L[i] / g.h + P + (lambda - 1.0) * std::max<double>(P, theta);
            g.M_ext[i] = round_up_multiple(raw, f_m);
            g.L_ext[i] = g.h * g.M_ext[i];
            g.pad[i] = g.L_ext[i] - cell.L[i];
        }
    }
    return g;
}

} // namespace sewald
