#pragma once

#include "sewald/domain.h"

namespace sewald {

// Rank-2 or rank-3 kernel values. Only the member matching `rank` is meaningful.
struct KernelTensor {
    int rank = 2;
    CMat3 m{};
    CTen3 t{};
};

struct KernelTensorR {
    int rank = 2;
    Mat3 m{};
    Ten3 t{};
};

// Free-space kernels S, Omega, T evaluated at separation r (singular at r=0).
KernelTensorR bare_kernel(Kernel kind, const Vec3& r);

// Fourier-space screening factor gamma(k; xi).
double screening_hat(Screening skind, const Vec3& k, double xi);

// Short-range parts of the Ewald split (singular at r=0).
KernelTensorR realspace_kernel(Kernel kind, const Vec3& r, double xi);

// Differential operator relating each kernel to its scalar base kernel.
KernelTensor diffop_hat(Kernel kind, const Vec3& k);

// Long-range part in Fourier space: diffop * scalar kernel * screening.
// Singular at k=0; that mode is handled by the truncated kernels.
KernelTensor fourier_kernel_hat(Kernel kind, const Vec3& k, double xi);

// Field a source induces on itself, removed from same-point evaluation.
Vec3 self_term(Kernel kind, double xi, const Vec3& strength);

// Mean-flow contribution of the fully periodic stresslet's k=0 mode,
// u(x) = -(8 pi / V) sum_n (x - x_n)(q_n . nu_n), accumulated in O(N + Nt).
std::vector<Vec3> stresslet_zero_mode_3p(const TargetSet& targets, const SourceSystem& system);

Vec3 apply(const KernelTensorR& K, const Vec3& f);
Vec3 apply(const KernelTensorR& K, const Vec3& q, const Vec3& nu);
CVec3 apply(const KernelTensor& K, const Vec3& f);
CVec3 apply(const KernelTensor& K, const Vec3& q, const Vec3& nu);

} // namespace sewald
