#pragma once

#include "sewald/domain.h"
#include "sewald/kernels.h"

namespace sewald {

// Truncated scalar base kernels replace the singular k=0 (and, for d=0, all-k)
// factors. Gauge constants default to the choices with fastest Fourier decay.
struct ModifiedKernelSpec {
    Kernel kind = Kernel::stokeslet;
    int d = 0;
    double R = 1.0;
    double a_B = 0.0;   // d=0 biharmonic gauge
    double b_B = 0.0;
    double ell_H = 1.0; // d=1 gauge
    double ell_B = 1.0;
    double c_B = 0.0;

    static ModifiedKernelSpec optimal(Kernel kind, int d, double R);
};

// R spans the free directions of the extended cell.
double truncation_radius(const std::array<double, 3>& L_ext, int d);

double harmonic_hat_trunc_0p(double kappa, double R);
double biharmonic_hat_trunc_0p(double kappa, double R, double a_B, double b_B);
double harmonic_hat_trunc_1p(double kappa, double R, double ell_H);
double biharmonic_hat_trunc_1p(double kappa, double R, double ell_B, double c_B);
cplx Z_hat_trunc_2p(double kappa3, double R);
double H2p_hat_trunc(double kappa3, double R);

// Kernel tensor with the k=0 singularity regularized; finite for every k.
KernelTensor modified_kernel_hat(const ModifiedKernelSpec& spec, const Vec3& k);

// Constant flow shift induced by the gauge constants (stokeslet only, d=0,1),
// to be subtracted from the computed field.
Vec3 gauge_flow_correction(const ModifiedKernelSpec& spec, const SourceSystem& system);

} // namespace sewald
