#include "sewald/kernels.h"

#include <cmath>
#include <stdexcept>

namespace sewald {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double levi_civita(int j, int l, int m) {
    if (j == l || l == m || m == j) return 0.0;
    // Even permutations of (0,1,2).
    if ((j == 0 && l == 1) || (j == 1 && l == 2) || (j == 2 && l == 0)) return 1.0;
    return -1.0;
}

void require_nonzero(const Vec3& r, const char* what) {
    if (r[0] == 0.0 && r[1] == 0.0 && r[2] == 0.0)
        throw std::domain_error(std::string(what) + " is singular at the origin");
}

} // namespace

KernelTensorR bare_kernel(Kernel kind, const Vec3& r) {
    require_nonzero(r, "bare kernel");
    const double r2 = norm2(r);
    const double rn = std::sqrt(r2);
    KernelTensorR out;
    switch (kind) {
        case Kernel::stokeslet: {
            out.rank = 2;
            const double inv_r = 1.0 / rn;
            const double inv_r3 = inv_r / r2;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    out.m[j][l] = (j == l ? inv_r : 0.0) + r[j] * r[l] * inv_r3;
            break;
        }
        case Kernel::rotlet: {
            out.rank = 2;
            const double inv_r3 = 1.0 / (r2 * rn);
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < 3; ++m) v += levi_civita(j, l, m) * r[m];
                    out.m[j][l] = v * inv_r3;
                }
            break;
        }
        case Kernel::stresslet: {
            out.rank = 3;
            const double inv_r5 = 1.0 / (r2 * r2 * rn);
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    for (int m = 0; m < 3; ++m)
                        out.t[j][l][m] = -6.0 * r[j] * r[l] * r[m] * inv_r5;
            break;
        }
    }
    return out;
}

double screening_hat(Screening skind, const Vec3& k, double xi) {
    const double q = norm2(k) / (4.0 * xi * xi);
    const double g = std::exp(-q);
    return skind == Screening::hasimoto ? g * (1.0 + q) : g;
}

KernelTensorR realspace_kernel(Kernel kind, const Vec3& r, double xi) {
    require_nonzero(r, "real-space kernel");
    const double r2 = norm2(r);
    const double rn = std::sqrt(r2);
    const double xr = xi * rn;
    const double erfc_term = std::erfc(xr) / rn;
    const double gauss = 2.0 * xi / kSqrtPi * std::exp(-xr * xr);
    KernelTensorR out;
    switch (kind) {
        case Kernel::stokeslet: {
            out.rank = 2;
            const double c = erfc_term + gauss;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) {
                    const double rr = r[j] * r[l] / r2;
                    out.m[j][l] = ((j == l ? 1.0 : 0.0) + rr) * c - (j == l ? 2.0 * gauss : 0.0);
                }
            break;
        }
        case Kernel::rotlet: {
            out.rank = 2;
            const double c = (erfc_term + gauss) / r2;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < 3; ++m) v += levi_civita(j, l, m) * r[m];
                    out.m[j][l] = v * c;
                }
            break;
        }
        case Kernel::stresslet: {
            out.rank = 3;
            const double c1 = -2.0 / (r2 * r2) * (3.0 * erfc_term + (3.0 + 2.0 * xr * xr) * gauss);
            const double c2 = 2.0 * xi * xi * gauss;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    for (int m = 0; m < 3; ++m) {
                        const double deltas = (j == l ? r[m] : 0.0) + (m == j ? r[l] : 0.0) +
                                              (l == m ? r[j] : 0.0);
                        out.t[j][l][m] = c1 * r[j] * r[l] * r[m] + c2 * deltas;
                    }
            break;
        }
    }
    return out;
}

KernelTensor diffop_hat(Kernel kind, const Vec3& k) {
    const double k2 = norm2(k);
    KernelTensor out;
    switch (kind) {
        case Kernel::stokeslet:
            out.rank = 2;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    out.m[j][l] = cplx((j == l ? -k2 : 0.0) + k[j] * k[l], 0.0);
            break;
        case Kernel::rotlet:
            out.rank = 2;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < 3; ++m) v += levi_civita(j, l, m) * k[m];
                    out.m[j][l] = cplx(0.0, -v);
                }
            break;
        case Kernel::stresslet:
            out.rank = 3;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    for (int m = 0; m < 3; ++m) {
                        const double deltas = (j == l ? k[m] : 0.0) + (m == j ? k[l] : 0.0) +
                                              (l == m ? k[j] : 0.0);
                        out.t[j][l][m] = cplx(0.0, -deltas * k2 + 2.0 * k[j] * k[l] * k[m]);
                    }
            break;
    }
    return out;
}

KernelTensor fourier_kernel_hat(Kernel kind, const Vec3& k, double xi) {
    const double k2 = norm2(k);
    if (k2 == 0.0) throw std::domain_error("long-range kernel is singular at k=0");
    const Screening skind = screening_of(kind);
    const double base = skind == Screening::hasimoto ? -8.0 * M_PI / (k2 * k2) : 4.0 * M_PI / k2;
    const double scale = base * screening_hat(skind, k, xi);
    KernelTensor out = diffop_hat(kind, k);
    if (out.rank == 2) {
        for (auto& row : out.m)
            for (auto& v : row) v *= scale;
    } else {
        for (auto& mat : out.t)
            for (auto& row : mat)
                for (auto& v : row) v *= scale;
    }
    return out;
}

Vec3 self_term(Kernel kind, double xi, const Vec3& strength) {
    if (kind == Kernel::stokeslet) return (-4.0 * xi / kSqrtPi) * strength;
    return {0.0, 0.0, 0.0};
}

std::vector<Vec3> stresslet_zero_mode_3p(const TargetSet& targets, const SourceSystem& system) {
    const double scale = -8.0 * M_PI / system.cell.volume();
    double s0 = 0.0;
    Vec3 s1{0.0, 0.0, 0.0};
    for (std::size_t n = 0; n < system.size(); ++n) {
        const double qn = dot(system.f[n], system.nu[n]);
        s0 += qn;
        s1 += qn * system.x[n];
    }
    std::vector<Vec3> u(targets.x.size());
    for (std::size_t m = 0; m < targets.x.size(); ++m)
        u[m] = scale * (s0 * targets.x[m] - s1);
    return u;
}

Vec3 apply(const KernelTensorR& K, const Vec3& f) {
    Vec3 u{};
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) u[j] += K.m[j][l] * f[l];
    return u;
}

Vec3 apply(const KernelTensorR& K, const Vec3& q, const Vec3& nu) {
    Vec3 u{};
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m) u[j] += K.t[j][l][m] * q[l] * nu[m];
    return u;
}

CVec3 apply(const KernelTensor& K, const Vec3& f) {
    CVec3 u{};
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) u[j] += K.m[j][l] * f[l];
    return u;
}

CVec3 apply(const KernelTensor& K, const Vec3& q, const Vec3& nu) {
    CVec3 u{};
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m) u[j] += K.t[j][l][m] * (q[l] * nu[m]);
    return u;
}

} // namespace sewald
