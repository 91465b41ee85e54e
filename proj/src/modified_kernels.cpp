#include "sewald/modified_kernels.h"

#include "sewald/specfun.h"

#include <cmath>
#include <stdexcept>

namespace sewald {

namespace {

// Power-series tables in x^2 for cos, sin(x)/x, J0, and x*J1.
constexpr int kNSeries = 13;

struct SeriesTables {
    double cosc[kNSeries];
    double sinc[kNSeries];
    double j0[kNSeries];
    double xj1[kNSeries];
};

const SeriesTables kTab = [] {
    SeriesTables t{};
    t.cosc[0] = 1.0;
    t.sinc[0] = 1.0;
    t.j0[0] = 1.0;
    t.xj1[0] = 0.0;
    t.xj1[1] = 0.5;
    for (int n = 1; n < kNSeries; ++n) {
        t.cosc[n] = -t.cosc[n - 1] / ((2.0 * n - 1.0) * (2.0 * n));
        t.sinc[n] = -t.sinc[n - 1] / ((2.0 * n) * (2.0 * n + 1.0));
        t.j0[n] = -t.j0[n - 1] / (4.0 * n * n);
        if (n >= 2) t.xj1[n] = -t.xj1[n - 1] / (4.0 * n * (n - 1.0));
    }
    return t;
}();

// Below this the (1 - cos), (1 - J0) style brackets cancel too many digits,
// so the kernels are evaluated from assembled power series instead. The
// series terms at n = 12 are below 1e-20 of the total for |x| <= 2, so the
// crossover can sit where the direct bracket is already well conditioned.
constexpr double kSeriesSwitch = 1.0;

double eval_series(const double* coef, int first, int count, double x2) {
    double acc = 0.0;
    for (int n = first + count - 1; n >= first; --n) acc = coef[n] + acc * x2;
    return acc;
}

} // namespace

ModifiedKernelSpec ModifiedKernelSpec::optimal(Kernel kind, int d, double R) {
    ModifiedKernelSpec s;
    s.kind = kind;
    s.d = d;
    s.R = R;
    s.a_B = -0.5 * R;
    s.b_B = -0.5 / R;
    s.ell_H = R;
    s.ell_B = R * std::sqrt(M_E);
    s.c_B = -0.5 * R * R;
    return s;
}

double truncation_radius(const std::array<double, 3>& L_ext, int d) {
    switch (d) {
        case 0: return std::sqrt(L_ext[0] * L_ext[0] + L_ext[1] * L_ext[1] + L_ext[2] * L_ext[2]);
        case 1: return std::sqrt(L_ext[1] * L_ext[1] + L_ext[2] * L_ext[2]);
        case 2: return L_ext[2];
        default: throw std::invalid_argument("truncation radius applies to d in {0,1,2}");
    }
}

double harmonic_hat_trunc_0p(double kappa, double R) {
    if (kappa == 0.0) return 2.0 * M_PI * R * R;
    const double s = std::sin(0.5 * R * kappa);
    return 8.0 * M_PI * s * s / (kappa * kappa);
}

double biharmonic_hat_trunc_0p(double kappa, double R, double a_B, double b_B) {
    const double x = R * kappa;
    const double bR3 = 3.0 * b_B * R;
    const double p = (a_B + R + b_B * R * R) / (2.0 * R);
    const double q = (a_B + 2.0 * R + 3.0 * b_B * R * R) / (2.0 * R);
    if (std::fabs(x) < kSeriesSwitch) {
        // bracket = 1 - (1+3bR)cos + p x^2 cos - q x^2 sinc + 3bR sinc;
        // the x^0 and x^2 coefficients vanish identically.
        double coef[kNSeries]{};
        for (int n = 2; n < kNSeries; ++n)
            coef[n] = -(1.0 + bR3) * kTab.cosc[n] + p * kTab.cosc[n - 1] -
                      q * kTab.sinc[n - 1] + bR3 * kTab.sinc[n];
        const double R2 = R * R;
        return -8.0 * M_PI * R2 * R2 * eval_series(coef, 2, kNSeries - 2, x * x);
    }
    const double bracket = 1.0 - (1.0 + bR3 - p * x * x) * std::cos(x) +
                           (bR3 - q * x * x) * std::sin(x) / x;
    const double k2 = kappa * kappa;
    return -8.0 * M_PI / (k2 * k2) * bracket;
}

double harmonic_hat_trunc_1p(double kappa, double R, double ell_H) {
    const double x = R * kappa;
    const double g = std::log(R / ell_H);
    if (std::fabs(x) < kSeriesSwitch) {
        double coef[kNSeries]{};
        for (int n = 1; n < kNSeries; ++n) coef[n] = -kTab.j0[n] - g * kTab.xj1[n];
        return 4.0 * M_PI * R * R * eval_series(coef, 1, kNSeries - 1, x * x);
    }
    const double bracket = 1.0 - bessel_J(0, x) - g * x * bessel_J(1, x);
    return 4.0 * M_PI / (kappa * kappa) * bracket;
}

double biharmonic_hat_trunc_1p(double kappa, double R, double ell_B, double c_B) {
    const double x = R * kappa;
    const double g = std::log(R / ell_B);
    const double ch = (c_B - R * R * g) / (R * R);
    if (std::fabs(x) < kSeriesSwitch) {
        double coef[kNSeries]{};
        for (int n = 2; n < kNSeries; ++n)
            coef[n] = -kTab.j0[n] - (1.0 + g) * kTab.xj1[n] +
                      0.25 * (1.0 + 2.0 * g) * kTab.j0[n - 1] - 0.25 * ch * kTab.xj1[n - 1];
        const double R2 = R * R;
        return -8.0 * M_PI * R2 * R2 * eval_series(coef, 2, kNSeries - 2, x * x);
    }
    const double j0 = bessel_J(0, x);
    const double j1 = bessel_J(1, x);
    const double bracket = 1.0 - j0 - x * (1.0 + g) * j1 +
                           0.25 * x * x * (1.0 + 2.0 * g) * j0 - 0.25 * x * x * x * ch * j1;
    const double k2 = kappa * kappa;
    return -8.0 * M_PI / (k2 * k2) * bracket;
}

cplx Z_hat_trunc_2p(double kappa3, double R) {
    if (kappa3 == 0.0) return {0.0, 0.0};
    const double s = std::sin(0.5 * R * kappa3);
    return {0.0, -8.0 * M_PI * s * s / kappa3};
}

double H2p_hat_trunc(double kappa3, double R) {
    if (kappa3 == 0.0) return -2.0 * M_PI * R * R;
    const double x = R * kappa3;
    const double s = std::sin(0.5 * x);
    const double bracket = 2.0 * s * s - x * std::sin(x);
    return 4.0 * M_PI / (kappa3 * kappa3) * bracket;
}

namespace {

KernelTensor scale_tensor(KernelTensor base, cplx scale) {
    if (base.rank == 2) {
        for (auto& row : base.m)
            for (auto& v : row) v *= scale;
    } else {
        for (auto& mat : base.t)
            for (auto& row : mat)
                for (auto& v : row) v *= scale;
    }
    return base;
}

// Unscreened long-range limit K-hat * A-hat away from the singular modes.
KernelTensor plain_kernel_hat(Kernel kind, const Vec3& k) {
    const double k2 = norm2(k);
    const double base = screening_of(kind) == Screening::hasimoto ? -8.0 * M_PI / (k2 * k2)
                                                                  : 4.0 * M_PI / k2;
    return scale_tensor(diffop_hat(kind, k), base);
}

KernelTensor zero_tensor(Kernel kind) {
    KernelTensor out;
    out.rank = kind == Kernel::stresslet ? 3 : 2;
    return out;
}

KernelTensor modified_1p_branch(const ModifiedKernelSpec& spec, double k2, double k3) {
    const double kappa = std::sqrt(k2 * k2 + k3 * k3);
    KernelTensor out = zero_tensor(spec.kind);
    switch (spec.kind) {
        case Kernel::rotlet: {
            const double H = harmonic_hat_trunc_1p(kappa, spec.R, spec.ell_H);
            out = scale_tensor(diffop_hat(Kernel::rotlet, {0.0, k2, k3}), H);
            break;
        }
        case Kernel::stokeslet: {
            const double H = harmonic_hat_trunc_1p(kappa, spec.R, spec.ell_H);
            const double B = biharmonic_hat_trunc_1p(kappa, spec.R, spec.ell_B, spec.c_B);
            out.m[0][0] = 2.0 * H;
            out.m[1][1] = -k3 * k3 * B;
            out.m[1][2] = k2 * k3 * B;
            out.m[2][1] = k2 * k3 * B;
            out.m[2][2] = -k2 * k2 * B;
            break;
        }
        case Kernel::stresslet: {
            const double H = harmonic_hat_trunc_1p(kappa, spec.R, spec.ell_H);
            const double B = biharmonic_hat_trunc_1p(kappa, spec.R, spec.ell_B, spec.c_B);
            const double kk = kappa * kappa;
            Ten3 cth{}, ctb{};
            cth[0][0][1] = cth[0][1][0] = k2;
            cth[0][0][2] = cth[0][2][0] = k3;
            cth[1][0][0] = k2;
            cth[2][0][0] = k3;
            ctb[1][1][1] = k2 * (3.0 * kk - 2.0 * k2 * k2);
            ctb[1][1][2] = ctb[1][2][1] = k3 * (kk - 2.0 * k2 * k2);
            ctb[1][2][2] = k2 * (kk - 2.0 * k3 * k3);
            ctb[2][1][1] = k3 * (kk - 2.0 * k2 * k2);
            ctb[2][1][2] = ctb[2][2][1] = k2 * (kk - 2.0 * k3 * k3);
            ctb[2][2][2] = k3 * (3.0 * kk - 2.0 * k3 * k3);
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    for (int m = 0; m < 3; ++m)
                        out.t[j][l][m] = cplx(0.0, 2.0 * cth[j][l][m] * H - ctb[j][l][m] * B);
            break;
        }
    }
    return out;
}

KernelTensor modified_2p_branch(const ModifiedKernelSpec& spec, double k3) {
    KernelTensor out = zero_tensor(spec.kind);
    switch (spec.kind) {
        case Kernel::stokeslet: {
            const double H = H2p_hat_trunc(k3, spec.R);
            out.m[0][0] = 2.0 * H;
            out.m[1][1] = 2.0 * H;
            break;
        }
        case Kernel::rotlet: {
            const cplx Z = Z_hat_trunc_2p(k3, spec.R);
            out.m[0][1] = Z;
            out.m[1][0] = -Z;
            break;
        }
        case Kernel::stresslet: {
            const cplx Z = Z_hat_trunc_2p(k3, spec.R);
            const cplx m2 = -2.0 * Z;
            out.t[0][0][2] = out.t[0][2][0] = m2;
            out.t[1][1][2] = out.t[1][2][1] = m2;
            out.t[2][0][0] = out.t[2][1][1] = out.t[2][2][2] = m2;
            break;
        }
    }
    return out;
}

} // namespace

KernelTensor modified_kernel_hat(const ModifiedKernelSpec& spec, const Vec3& k) {
    switch (spec.d) {
        case 3:
            if (k[0] == 0.0 && k[1] == 0.0 && k[2] == 0.0) return zero_tensor(spec.kind);
            return plain_kernel_hat(spec.kind, k);
        case 2:
            if (k[0] != 0.0 || k[1] != 0.0) return plain_kernel_hat(spec.kind, k);
            return modified_2p_branch(spec, k[2]);
        case 1:
            if (k[0] != 0.0) return plain_kernel_hat(spec.kind, k);
            return modified_1p_branch(spec, k[1], k[2]);
        case 0: {
            if (k[0] == 0.0 && k[1] == 0.0 && k[2] == 0.0) return zero_tensor(spec.kind);
            const double kappa = std::sqrt(norm2(k));
            const double A = spec.kind == Kernel::rotlet
                                 ? harmonic_hat_trunc_0p(kappa, spec.R)
                                 : biharmonic_hat_trunc_0p(kappa, spec.R, spec.a_B, spec.b_B);
            return scale_tensor(diffop_hat(spec.kind, k), A);
        }
        default:
            throw std::invalid_argument("periodicity must be in 0..3");
    }
}

Vec3 gauge_flow_correction(const ModifiedKernelSpec& spec, const SourceSystem& system) {
    if (spec.kind != Kernel::stokeslet || spec.d > 1) return {0.0, 0.0, 0.0};
    Vec3 fsum{0.0, 0.0, 0.0};
    for (const Vec3& f : system.f) fsum += f;
    if (spec.d == 0) return (4.0 * spec.b_B) * fsum;
    const double c1 = std::log(spec.ell_H * M_E) * 4.0;
    const double c23 = std::log(spec.ell_B) * 2.0;
    const double inv_L1 = 1.0 / system.cell.L[0];
    return {c1 * inv_L1 * fsum[0], c23 * inv_L1 * fsum[1], c23 * inv_L1 * fsum[2]};
}

} // namespace sewald
