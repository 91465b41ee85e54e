#pragma once

#include "sewald/domain.h"
#include "sewald/estimates.h"
#include "sewald/grid.h"
#include "sewald/modified_kernels.h"
#include "sewald/window.h"

#include <array>
#include <vector>

namespace sewald {

// Componentwise real data on the extended grid, last axis fastest.
struct RealField {
    std::array<int, 3> n{};
    int comps = 0;
    std::vector<double> v;

    static RealField zeros(const std::array<int, 3>& n, int comps);

    double& at(int c, int i, int j, int k) {
        return v[((static_cast<long>(c) * n[0] + i) * n[1] + j) * n[2] + k];
    }
    double at(int c, int i, int j, int k) const {
        return v[((static_cast<long>(c) * n[0] + i) * n[1] + j) * n[2] + k];
    }
};

// Mixed-space coefficients. Periodic directions are fully resolved; free
// directions are stored per upsampling class at that class's padded length:
// the zero periodic mode in `zero`, modes within the k_star thresholds in
// `near`, everything in `far`. Rows of `far` whose periodic mode belongs to
// another class are carried along unscaled and overwritten on inversion.
struct FourierField {
    int d = 3;
    int comps = 0;
    std::array<int, 3> n_per{1, 1, 1};  // mode counts on periodic axes
    std::array<int, 3> n_far{1, 1, 1};  // free-axis lengths, no padding
    std::array<int, 3> n_near{1, 1, 1}; // free-axis lengths at s_star
    std::array<int, 3> n_zero{1, 1, 1}; // free-axis lengths at s0
    std::vector<cplx> far;
    std::vector<int> near_rows;         // flat periodic-mode rows inside K_star
    std::vector<cplx> near;
    std::vector<cplx> zero;
};

// Scalar kernel for d = 0 after real-space truncation to the doubled
// extended box (mollified for the biharmonic), stored as its transform on
// the (2 M_ext)^3 mode grid. Lets the pipeline run with padding factor 2
// instead of s0.
struct PrecomputedKernel0P {
    Kernel kind = Kernel::stokeslet;
    std::array<int, 3> n{};
    double R = 0.0;
    std::vector<cplx> table;
};

RealField spread(const SourceSystem& system, const GridSpec& grid, const Window& window);

FourierField aft_forward(const RealField& field, const GridSpec& grid, const UpsamplingPlan& plan);
RealField aft_inverse(const FourierField& field, const GridSpec& grid, const UpsamplingPlan& plan);

// Multiplies each retained mode by G_hat(k) gamma_hat(k; xi) / w_hat(k)^2.
// The stresslet contracts its nine strength components down to three.
FourierField scale(const FourierField& field, const ModifiedKernelSpec& spec, double xi,
                   const Window& window, const GridSpec& grid);
FourierField scale(const FourierField& field, const PrecomputedKernel0P& pre, double xi,
                   const Window& window, const GridSpec& grid);

std::vector<Vec3> gather(const RealField& field, const GridSpec& grid, const Window& window,
                         const TargetSet& targets);

PrecomputedKernel0P precompute_0p(Kernel kind, const GridSpec& grid, double R);

struct SePipelineOptions {
    bool precompute_0p = true;                  // d = 0: doubled grid + kernel table
    const PrecomputedKernel0P* table = nullptr; // reuse a table built earlier
};

std::vector<Vec3> se_fourier_potential(const SourceSystem& system, const TargetSet& targets,
                                       const EwaldParams& params, const SePipelineOptions& opt = {});

namespace detail {

// Edge taper applied to the truncated biharmonic table; 1 + 1e-8 at t = 0,
// symmetric about t = 3.5.
double mollifier_taper(double t);

} // namespace detail

} // namespace sewald
