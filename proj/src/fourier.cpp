#include "sewald/fourier.h"

#include "sewald/kernels.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace sewald {

namespace {

constexpr double kPi = 3.14159265358979323846;

long cells(const std::array<int, 3>& n) {
    return static_cast<long>(n[0]) * n[1] * n[2];
}

long flat(const std::array<int, 3>& n, int i, int j, int k) {
    return (static_cast<long>(i) * n[1] + j) * n[2] + k;
}

int signed_mode(int m, int n) {
    return m < (n + 1) / 2 ? m : m - n;
}

// In-place complex DFT along one axis of a row-major (n0, n1, n2) block,
// batched over the other two axes. sign is FFTW_FORWARD or FFTW_BACKWARD;
// no normalization is applied.
void fft_axis(cplx* data, const std::array<int, 3>& n, int axis, int sign) {
    int len = n[axis];
    if (len == 1) return;
    auto* a = reinterpret_cast<fftw_complex*>(data);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (axis == 2) {
        int howmany = n[0] * n[1];
        fftw_plan p = fftw_plan_many_dft(1, &len, howmany, a, nullptr, 1, len, a, nullptr, 1, len,
                                         sign, flags);
        fftw_execute(p);
        fftw_destroy_plan(p);
    } else if (axis == 0) {
        int howmany = n[1] * n[2];
        fftw_plan p = fftw_plan_many_dft(1, &len, howmany, a, nullptr, howmany, 1, a, nullptr,
                                         howmany, 1, sign, flags);
        fftw_execute(p);
        fftw_destroy_plan(p);
    } else {
        int howmany = n[2];
        fftw_plan p = fftw_plan_many_dft(1, &len, howmany, a, nullptr, n[2], 1, a, nullptr, n[2],
                                         1, sign, flags);
        long slab = static_cast<long>(n[1]) * n[2];
        for (int i = 0; i < n[0]; ++i)
            fftw_execute_dft(p, a + i * slab, a + i * slab);
        fftw_destroy_plan(p);
    }
}

// Discrete wavenumbers along one axis of length n with spacing h, DFT order.
std::vector<double> wavenumber_table(int n, double h) {
    std::vector<double> k(n);
    const double dk = 2.0 * kPi / (n * h);
    for (int m = 0; m < n; ++m) k[m] = dk * signed_mode(m, n);
    return k;
}

std::vector<double> window_table(const Window& win, const std::vector<double>& ktab) {
    const double w0 = win.hat1d(0.0);
    std::vector<double> w(ktab.size());
    for (std::size_t m = 0; m < ktab.size(); ++m) {
        w[m] = win.hat1d(ktab[m]);
        if (!(std::isfinite(w[m]) && std::fabs(w[m]) > 1e-14 * std::fabs(w0)))
            throw std::runtime_error("window transform vanishes at a retained mode; "
                                     "the window is too narrow for this grid");
    }
    return w;
}

// Copies a (possibly smaller) corner block between row-major arrays.
void block_copy(const cplx* src, const std::array<int, 3>& ns, cplx* dst,
                const std::array<int, 3>& nd, const std::array<int, 3>& nb) {
    for (int i = 0; i < nb[0]; ++i)
        for (int j = 0; j < nb[1]; ++j)
            std::memcpy(dst + flat(nd, i, j, 0), src + flat(ns, i, j, 0),
                        static_cast<std::size_t>(nb[2]) * sizeof(cplx));
}

int padded_size(double s, int m_ext) {
    double v = s * m_ext;
    long r = std::lround(v);
    if (std::fabs(v - static_cast<double>(r)) > 1e-6 || r < m_ext)
        throw std::invalid_argument("upsampling factor does not yield an integer grid size");
    return static_cast<int>(r);
}

// Flat periodic-mode row -> 0 far, 1 near, 2 zero; fills the near row list.
std::vector<std::uint8_t> classify_rows(const GridSpec& grid, const UpsamplingPlan& plan,
                                        const std::array<int, 3>& n_per,
                                        std::vector<int>& near_rows) {
    std::vector<std::uint8_t> cls(cells(n_per), 0);
    near_rows.clear();
    for (int i = 0; i < n_per[0]; ++i)
        for (int j = 0; j < n_per[1]; ++j)
            for (int k = 0; k < n_per[2]; ++k) {
                std::array<int, 3> m{i, j, k};
                bool zero = true, near = true;
                for (int ax = 0; ax < grid.d; ++ax) {
                    int sm = signed_mode(m[ax], n_per[ax]);
                    if (sm != 0) zero = false;
                    if (std::abs(sm) > plan.k_star[ax]) near = false;
                }
                long row = flat(n_per, i, j, k);
                if (zero)
                    cls[row] = 2;
                else if (near) {
                    cls[row] = 1;
                    near_rows.push_back(static_cast<int>(row));
                }
            }
    return cls;
}

struct ClassGeometry {
    std::array<int, 3> shape;    // cube shape used for the free transforms
    std::array<int, 3> src;      // unpadded block shape within it
    long block;                  // elements per periodic row
};

// Shapes of the per-row free blocks for the zero / near buffers. Rows sit
// along axis 0, which folds the periodic axes together.
ClassGeometry class_geometry(const GridSpec& grid, const std::array<int, 3>& n_class, int rows) {
    ClassGeometry g{};
    if (grid.d == 1) {
        g.shape = {rows, n_class[1], n_class[2]};
        g.src = {1, grid.M_ext[1], grid.M_ext[2]};
    } else {
        g.shape = {rows, 1, n_class[2]};
        g.src = {1, 1, grid.M_ext[2]};
    }
    g.block = static_cast<long>(g.shape[1]) * g.shape[2];
    return g;
}

void check_field_shape(const RealField& field, const GridSpec& grid) {
    if (field.n != grid.M_ext)
        throw std::invalid_argument("field shape does not match the extended grid");
    if (field.comps < 1 || field.v.size() != static_cast<std::size_t>(field.comps) * cells(field.n))
        throw std::invalid_argument("field storage is inconsistent");
}

void check_window(const Window& win, const GridSpec& grid) {
    if (std::fabs(win.spec().h - grid.h) > 1e-12 * grid.h)
        throw std::invalid_argument("window was built for a different grid spacing");
}

// Per-axis stencil of the P window values around one point, plus the grid
// indices they touch. Periodic axes wrap; free axes must stay inside the
// extended box.
struct Stencil {
    std::array<std::vector<int>, 3> idx;
    std::array<std::vector<double>, 3> w;
};

void build_stencil(const Vec3& x, const GridSpec& grid, const Window& win, Stencil& st) {
    const int P = win.spec().P;
    const double h = grid.h;
    for (int ax = 0; ax < 3; ++ax) {
        st.idx[ax].resize(P);
        st.w[ax].resize(P);
        const double x0 = ax < grid.d ? 0.0 : -0.5 * grid.pad[ax];
        const double rel = (x[ax] - x0) / h;
        const int j0 = static_cast<int>(std::ceil(rel - 0.5 * P));
        const int n = grid.M_ext[ax];
        if (ax >= grid.d && (j0 < 0 || j0 + P > n))
            throw std::invalid_argument("point too close to the extended box boundary; "
                                        "free-direction padding is too small");
        for (int p = 0; p < P; ++p) {
            int j = j0 + p;
            st.w[ax][p] = win.eval1d((j - rel) * h);
            if (ax < grid.d) j = (j % n + n) % n;
            st.idx[ax][p] = j;
        }
    }
}

void apply_rank2(const KernelTensor& G, double fac, const cplx* in, long sin, cplx* out,
                 long sout) {
    for (int j = 0; j < 3; ++j) {
        cplx acc = G.m[j][0] * in[0] + G.m[j][1] * in[sin] + G.m[j][2] * in[2 * sin];
        out[static_cast<long>(j) * sout] = fac * acc;
    }
}

void apply_rank3(const KernelTensor& G, double fac, const cplx* in, long sin, cplx* out,
                 long sout) {
    for (int j = 0; j < 3; ++j) {
        cplx acc{};
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m) acc += G.t[j][l][m] * in[(3 * l + m) * sin];
        out[static_cast<long>(j) * sout] = fac * acc;
    }
}

void apply_mode(const ModifiedKernelSpec& spec, Screening scr, double xi, const Vec3& k,
                double wprod, const cplx* in, long sin, cplx* out, long sout) {
    KernelTensor G = modified_kernel_hat(spec, k);
    const double fac = screening_hat(scr, k, xi) / (wprod * wprod);
    if (G.rank == 2)
        apply_rank2(G, fac, in, sin, out, sout);
    else
        apply_rank3(G, fac, in, sin, out, sout);
}

} // namespace

namespace detail {

double mollifier_taper(double t) {
    const double a2 = 4.0 * std::log(100.0) / 49.0;
    return std::exp(-a2 * t * t) + std::exp(-a2 * (t - 7.0) * (t - 7.0));
}

} // namespace detail

RealField RealField::zeros(const std::array<int, 3>& n, int comps) {
    RealField f;
    f.n = n;
    f.comps = comps;
    f.v.assign(static_cast<std::size_t>(comps) * cells(n), 0.0);
    return f;
}

RealField spread(const SourceSystem& system, const GridSpec& grid, const Window& window) {
    validate_system(system);
    check_window(window, grid);
    if (system.d != grid.d)
        throw std::invalid_argument("system and grid periodicity differ");

    const int C = strength_components(system.kind);
    RealField out = RealField::zeros(grid.M_ext, C);
    const long cs = cells(grid.M_ext);
    const int P = window.spec().P;
    const auto& n = grid.M_ext;

    Stencil st;
    std::array<double, 9> fc{};
    for (std::size_t s = 0; s < system.size(); ++s) {
        build_stencil(system.x[s], grid, window, st);
        if (C == 3) {
            for (int c = 0; c < 3; ++c) fc[c] = system.f[s][c];
        } else {
            for (int l = 0; l < 3; ++l)
                for (int m = 0; m < 3; ++m) fc[3 * l + m] = system.f[s][l] * system.nu[s][m];
        }
        for (int p1 = 0; p1 < P; ++p1) {
            const double w1 = st.w[0][p1];
            const long o1 = static_cast<long>(st.idx[0][p1]) * n[1];
            for (int p2 = 0; p2 < P; ++p2) {
                const double w12 = w1 * st.w[1][p2];
                const long o2 = (o1 + st.idx[1][p2]) * n[2];
                for (int p3 = 0; p3 < P; ++p3) {
                    const double w = w12 * st.w[2][p3];
                    const long idx = o2 + st.idx[2][p3];
                    for (int c = 0; c < C; ++c) out.v[c * cs + idx] += w * fc[c];
                }
            }
        }
    }
    return out;
}

std::vector<Vec3> gather(const RealField& field, const GridSpec& grid, const Window& window,
                         const TargetSet& targets) {
    check_field_shape(field, grid);
    check_window(window, grid);
    if (field.comps != 3)
        throw std::invalid_argument("gather expects a 3-component field");

    const long cs = cells(grid.M_ext);
    const int P = window.spec().P;
    const double h3 = grid.h * grid.h * grid.h;
    const auto& n = grid.M_ext;

    std::vector<Vec3> u(targets.x.size(), Vec3{0.0, 0.0, 0.0});
    Stencil st;
    for (std::size_t t = 0; t < targets.x.size(); ++t) {
        build_stencil(targets.x[t], grid, window, st);
        Vec3 acc{0.0, 0.0, 0.0};
        for (int p1 = 0; p1 < P; ++p1) {
            const double w1 = st.w[0][p1];
            const long o1 = static_cast<long>(st.idx[0][p1]) * n[1];
            for (int p2 = 0; p2 < P; ++p2) {
                const double w12 = w1 * st.w[1][p2];
                const long o2 = (o1 + st.idx[1][p2]) * n[2];
                for (int p3 = 0; p3 < P; ++p3) {
                    const double w = w12 * st.w[2][p3];
                    const long idx = o2 + st.idx[2][p3];
                    for (int c = 0; c < 3; ++c) acc[c] += w * field.v[c * cs + idx];
                }
            }
        }
        u[t] = h3 * acc;
    }
    return u;
}

FourierField aft_forward(const RealField& field, const GridSpec& grid, const UpsamplingPlan& plan) {
    check_field_shape(field, grid);
    const int d = grid.d;
    const int C = field.comps;
    const double h3 = grid.h * grid.h * grid.h;

    FourierField F;
    F.d = d;
    F.comps = C;
    for (int ax = 0; ax < 3; ++ax) {
        if (ax < d) {
            F.n_per[ax] = grid.M[ax];
        } else {
            F.n_far[ax] = grid.M_ext[ax];
            F.n_near[ax] = padded_size(plan.s_star, grid.M_ext[ax]);
            F.n_zero[ax] = padded_size(plan.s0, grid.M_ext[ax]);
        }
    }

    if (d == 3) {
        const auto& shape = grid.M_ext;
        const long vol = cells(shape);
        F.far.resize(static_cast<std::size_t>(C) * vol);
        for (int c = 0; c < C; ++c) {
            cplx* fc = F.far.data() + static_cast<long>(c) * vol;
            for (long i = 0; i < vol; ++i) fc[i] = h3 * field.v[c * vol + i];
            for (int ax = 0; ax < 3; ++ax) fft_axis(fc, shape, ax, FFTW_FORWARD);
        }
        return F;
    }

    if (d == 0) {
        const std::array<int, 3> zshape{F.n_zero[0], F.n_zero[1], F.n_zero[2]};
        const long zvol = cells(zshape);
        const long svol = cells(grid.M_ext);
        F.zero.assign(static_cast<std::size_t>(C) * zvol, cplx{});
        for (int c = 0; c < C; ++c) {
            cplx* zc = F.zero.data() + static_cast<long>(c) * zvol;
            for (int i = 0; i < grid.M_ext[0]; ++i)
                for (int j = 0; j < grid.M_ext[1]; ++j)
                    for (int k = 0; k < grid.M_ext[2]; ++k)
                        zc[flat(zshape, i, j, k)] =
                            h3 * field.v[c * svol + flat(grid.M_ext, i, j, k)];
            for (int ax = 0; ax < 3; ++ax) fft_axis(zc, zshape, ax, FFTW_FORWARD);
        }
        return F;
    }

    // d = 1 or 2: periodic-direction FFT, then per-class free-direction FFTs.
    const auto& shape = grid.M_ext;
    const long vol = cells(shape);
    const long nrows = cells(F.n_per);
    const long flen = vol / nrows;
    F.far.resize(static_cast<std::size_t>(C) * vol);
    for (int c = 0; c < C; ++c) {
        cplx* fc = F.far.data() + static_cast<long>(c) * vol;
        for (long i = 0; i < vol; ++i) fc[i] = h3 * field.v[c * vol + i];
        for (int ax = 0; ax < d; ++ax) fft_axis(fc, shape, ax, FFTW_FORWARD);
    }

    classify_rows(grid, plan, F.n_per, F.near_rows);
    const int R = static_cast<int>(F.near_rows.size());

    // Free blocks of the zero and near rows, saved before the in-place
    // unpadded transforms below overwrite them.
    std::vector<cplx> zsrc(static_cast<std::size_t>(C) * flen);
    std::vector<cplx> nsrc(static_cast<std::size_t>(C) * R * flen);
    for (int c = 0; c < C; ++c) {
        const cplx* fc = F.far.data() + static_cast<long>(c) * vol;
        std::memcpy(zsrc.data() + static_cast<long>(c) * flen, fc,
                    static_cast<std::size_t>(flen) * sizeof(cplx));
        for (int r = 0; r < R; ++r)
            std::memcpy(nsrc.data() + (static_cast<long>(c) * R + r) * flen,
                        fc + static_cast<long>(F.near_rows[r]) * flen,
                        static_cast<std::size_t>(flen) * sizeof(cplx));
    }

    for (int c = 0; c < C; ++c) {
        cplx* fc = F.far.data() + static_cast<long>(c) * vol;
        for (int ax = d; ax < 3; ++ax) fft_axis(fc, shape, ax, FFTW_FORWARD);
    }

    const ClassGeometry zg = class_geometry(grid, F.n_zero, 1);
    F.zero.assign(static_cast<std::size_t>(C) * zg.block, cplx{});
    for (int c = 0; c < C; ++c) {
        cplx* zc = F.zero.data() + static_cast<long>(c) * zg.block;
        block_copy(zsrc.data() + static_cast<long>(c) * flen, zg.src, zc,
                   {1, zg.shape[1], zg.shape[2]}, zg.src);
        for (int ax = 1; ax < 3; ++ax)
            fft_axis(zc, {1, zg.shape[1], zg.shape[2]}, ax, FFTW_FORWARD);
    }

    const ClassGeometry ng = class_geometry(grid, F.n_near, R);
    F.near.assign(static_cast<std::size_t>(C) * R * ng.block, cplx{});
    if (R > 0) {
        for (int c = 0; c < C; ++c) {
            cplx* nc = F.near.data() + static_cast<long>(c) * R * ng.block;
            for (int r = 0; r < R; ++r)
                block_copy(nsrc.data() + (static_cast<long>(c) * R + r) * flen, ng.src,
                           nc + static_cast<long>(r) * ng.block, {1, ng.shape[1], ng.shape[2]},
                           ng.src);
            for (int ax = 1; ax < 3; ++ax) fft_axis(nc, ng.shape, ax, FFTW_FORWARD);
        }
    }
    return F;
}

RealField aft_inverse(const FourierField& field, const GridSpec& grid, const UpsamplingPlan&) {
    const int d = grid.d;
    const int C = field.comps;
    if (field.d != d)
        throw std::invalid_argument("field and grid periodicity differ");
    const double h3 = grid.h * grid.h * grid.h;

    if (d == 3) {
        const auto& shape = grid.M_ext;
        const long vol = cells(shape);
        std::vector<cplx> work(field.far);
        RealField out = RealField::zeros(shape, C);
        const double norm = 1.0 / (h3 * static_cast<double>(vol));
        for (int c = 0; c < C; ++c) {
            cplx* wc = work.data() + static_cast<long>(c) * vol;
            for (int ax = 0; ax < 3; ++ax) fft_axis(wc, shape, ax, FFTW_BACKWARD);
            for (long i = 0; i < vol; ++i) out.v[c * vol + i] = wc[i].real() * norm;
        }
        return out;
    }

    if (d == 0) {
        const std::array<int, 3> zshape{field.n_zero[0], field.n_zero[1], field.n_zero[2]};
        const long zvol = cells(zshape);
        const long svol = cells(grid.M_ext);
        std::vector<cplx> work(field.zero);
        RealField out = RealField::zeros(grid.M_ext, C);
        const double norm = 1.0 / (h3 * static_cast<double>(zvol));
        for (int c = 0; c < C; ++c) {
            cplx* wc = work.data() + static_cast<long>(c) * zvol;
            for (int ax = 0; ax < 3; ++ax) fft_axis(wc, zshape, ax, FFTW_BACKWARD);
            for (int i = 0; i < grid.M_ext[0]; ++i)
                for (int j = 0; j < grid.M_ext[1]; ++j)
                    for (int k = 0; k < grid.M_ext[2]; ++k)
                        out.v[c * svol + flat(grid.M_ext, i, j, k)] =
                            wc[flat(zshape, i, j, k)].real() * norm;
        }
        return out;
    }

    const auto& shape = grid.M_ext;
    const long vol = cells(shape);
    const long nrows = cells(field.n_per);
    const long flen = vol / nrows;
    const int R = static_cast<int>(field.near_rows.size());

    std::vector<cplx> work(field.far);
    double inv_free = 1.0;
    for (int ax = d; ax < 3; ++ax) inv_free /= field.n_far[ax];
    for (int c = 0; c < C; ++c) {
        cplx* wc = work.data() + static_cast<long>(c) * vol;
        for (int ax = d; ax < 3; ++ax) fft_axis(wc, shape, ax, FFTW_BACKWARD);
    }
    for (auto& v : work) v *= inv_free;

    // Zero and near rows: inverse-transform at their padded lengths, then
    // truncate the padding and overwrite the corresponding rows.
    const ClassGeometry zg = class_geometry(grid, field.n_zero, 1);
    double inv_zero = 1.0;
    for (int ax = d; ax < 3; ++ax) inv_zero /= field.n_zero[ax];
    std::vector<cplx> zwork(field.zero);
    for (int c = 0; c < C; ++c) {
        cplx* zc = zwork.data() + static_cast<long>(c) * zg.block;
        for (int ax = 1; ax < 3; ++ax)
            fft_axis(zc, {1, zg.shape[1], zg.shape[2]}, ax, FFTW_BACKWARD);
        cplx* dst = work.data() + static_cast<long>(c) * vol;
        for (int j = 0; j < zg.src[1]; ++j)
            for (int k = 0; k < zg.src[2]; ++k)
                dst[static_cast<long>(j) * grid.M_ext[2] + k] =
                    zc[flat({1, zg.shape[1], zg.shape[2]}, 0, j, k)] * inv_zero;
    }

    if (R > 0) {
        const ClassGeometry ng = class_geometry(grid, field.n_near, R);
        double inv_near = 1.0;
        for (int ax = d; ax < 3; ++ax) inv_near /= field.n_near[ax];
        std::vector<cplx> nwork(field.near);
        for (int c = 0; c < C; ++c) {
            cplx* nc = nwork.data() + static_cast<long>(c) * R * ng.block;
            for (int ax = 1; ax < 3; ++ax) fft_axis(nc, ng.shape, ax, FFTW_BACKWARD);
            for (int r = 0; r < R; ++r) {
                cplx* dst = work.data() + static_cast<long>(c) * vol +
                            static_cast<long>(field.near_rows[r]) * flen;
                const cplx* src = nc + static_cast<long>(r) * ng.block;
                for (int j = 0; j < ng.src[1]; ++j)
                    for (int k = 0; k < ng.src[2]; ++k)
                        dst[static_cast<long>(j) * grid.M_ext[2] + k] =
                            src[static_cast<long>(j) * ng.shape[2] + k] * inv_near;
            }
        }
    }

    double inv_per = 1.0;
    for (int ax = 0; ax < d; ++ax) inv_per /= grid.M[ax];
    const double norm = inv_per / h3;
    RealField out = RealField::zeros(shape, C);
    for (int c = 0; c < C; ++c) {
        cplx* wc = work.data() + static_cast<long>(c) * vol;
        for (int ax = 0; ax < d; ++ax) fft_axis(wc, shape, ax, FFTW_BACKWARD);
        for (long i = 0; i < vol; ++i) out.v[c * vol + i] = wc[i].real() * norm;
    }
    return out;
}

FourierField scale(const FourierField& field, const ModifiedKernelSpec& spec, double xi,
                   const Window& window, const GridSpec& grid) {
    if (field.d != grid.d || spec.d != grid.d)
        throw std::invalid_argument("field, kernel and grid periodicity must agree");
    if (field.comps != strength_components(spec.kind))
        throw std::invalid_argument("field component count does not match the kernel");
    if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
    check_window(window, grid);

    const Screening scr = screening_of(spec.kind);
    const int d = grid.d;

    FourierField out;
    out.d = field.d;
    out.comps = 3;
    out.n_per = field.n_per;
    out.n_far = field.n_far;
    out.n_near = field.n_near;
    out.n_zero = field.n_zero;
    out.near_rows = field.near_rows;

    // Periodic-axis tables are shared by every class.
    std::array<std::vector<double>, 3> kper, wper;
    for (int ax = 0; ax < d; ++ax) {
        kper[ax] = wavenumber_table(grid.M[ax], grid.h);
        wper[ax] = window_table(window, kper[ax]);
    }

    if (d == 3) {
        const auto& shape = grid.M_ext;
        const long vol = cells(shape);
        out.far.assign(static_cast<std::size_t>(3) * vol, cplx{});
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const Vec3 kv{kper[0][i], kper[1][j], kper[2][k]};
                    const double wp = wper[0][i] * wper[1][j] * wper[2][k];
                    const long idx = flat(shape, i, j, k);
                    apply_mode(spec, scr, xi, kv, wp, field.far.data() + idx, vol,
                               out.far.data() + idx, vol);
                }
        return out;
    }

    if (d == 0) {
        const std::array<int, 3> zshape{field.n_zero[0], field.n_zero[1], field.n_zero[2]};
        const long zvol = cells(zshape);
        std::array<std::vector<double>, 3> kz, wz;
        for (int ax = 0; ax < 3; ++ax) {
            kz[ax] = wavenumber_table(zshape[ax], grid.h);
            wz[ax] = window_table(window, kz[ax]);
        }
        out.zero.assign(static_cast<std::size_t>(3) * zvol, cplx{});
        for (int i = 0; i < zshape[0]; ++i)
            for (int j = 0; j < zshape[1]; ++j)
                for (int k = 0; k < zshape[2]; ++k) {
                    const Vec3 kv{kz[0][i], kz[1][j], kz[2][k]};
                    const double wp = wz[0][i] * wz[1][j] * wz[2][k];
                    const long idx = flat(zshape, i, j, k);
                    apply_mode(spec, scr, xi, kv, wp, field.zero.data() + idx, zvol,
                               out.zero.data() + idx, zvol);
                }
        return out;
    }

    // d = 1 or 2.
    const auto& shape = grid.M_ext;
    const long vol = cells(shape);
    const long nrows = cells(field.n_per);
    std::vector<std::uint8_t> cls(nrows, 0);
    cls[0] = 2;
    for (int r : field.near_rows) cls[r] = 1;

    std::array<std::vector<double>, 3> kfar, wfar;
    for (int ax = d; ax < 3; ++ax) {
        kfar[ax] = wavenumber_table(field.n_far[ax], grid.h);
        wfar[ax] = window_table(window, kfar[ax]);
    }

    out.far.assign(static_cast<std::size_t>(3) * vol, cplx{});
    for (int i = 0; i < shape[0]; ++i)
        for (int j = 0; j < shape[1]; ++j) {
            if (d == 1 && cls[i] != 0) break;
            if (d == 2 && cls[static_cast<long>(i) * shape[1] + j] != 0) continue;
            const double kj = d == 1 ? kfar[1][j] : kper[1][j];
            const double wj = d == 1 ? wfar[1][j] : wper[1][j];
            for (int k = 0; k < shape[2]; ++k) {
                const Vec3 kv{kper[0][i], kj, kfar[2][k]};
                const double wp = wper[0][i] * wj * wfar[2][k];
                const long idx = flat(shape, i, j, k);
                apply_mode(spec, scr, xi, kv, wp, field.far.data() + idx, vol,
                           out.far.data() + idx, vol);
            }
        }

    const ClassGeometry zg = class_geometry(grid, field.n_zero, 1);
    std::array<std::vector<double>, 3> kz, wz;
    for (int ax = d; ax < 3; ++ax) {
        kz[ax] = wavenumber_table(field.n_zero[ax], grid.h);
        wz[ax] = window_table(window, kz[ax]);
    }
    out.zero.assign(static_cast<std::size_t>(3) * zg.block, cplx{});
    {
        double wper0 = 1.0;
        for (int ax = 0; ax < d; ++ax) wper0 *= wper[ax][0];
        const std::array<int, 3> zs{1, zg.shape[1], zg.shape[2]};
        for (int j = 0; j < zs[1]; ++j)
            for (int k = 0; k < zs[2]; ++k) {
                const Vec3 kv{0.0, d == 1 ? kz[1][j] : 0.0, kz[2][k]};
                const double wp = wper0 * (d == 1 ? wz[1][j] : 1.0) * wz[2][k];
                const long idx = flat(zs, 0, j, k);
                apply_mode(spec, scr, xi, kv, wp, field.zero.data() + idx, zg.block,
                           out.zero.data() + idx, zg.block);
            }
    }

    const int R = static_cast<int>(field.near_rows.size());
    if (R > 0) {
        const ClassGeometry ng = class_geometry(grid, field.n_near, R);
        std::array<std::vector<double>, 3> kn, wn;
        for (int ax = d; ax < 3; ++ax) {
            kn[ax] = wavenumber_table(field.n_near[ax], grid.h);
            wn[ax] = window_table(window, kn[ax]);
        }
        out.near.assign(static_cast<std::size_t>(3) * R * ng.block, cplx{});
        const long cstride = static_cast<long>(R) * ng.block;
        for (int r = 0; r < R; ++r) {
            const int row = field.near_rows[r];
            const int m0 = d == 1 ? row : row / field.n_per[1];
            const int m1 = d == 1 ? 0 : row % field.n_per[1];
            double kp1 = d == 2 ? kper[1][m1] : 0.0;
            double wprow = wper[0][m0] * (d == 2 ? wper[1][m1] : 1.0);
            for (int j = 0; j < ng.shape[1]; ++j)
                for (int k = 0; k < ng.shape[2]; ++k) {
                    const Vec3 kv{kper[0][m0], d == 1 ? kn[1][j] : kp1, kn[2][k]};
                    const double wp = wprow * (d == 1 ? wn[1][j] : 1.0) * wn[2][k];
                    const long idx = static_cast<long>(r) * ng.block +
                                     static_cast<long>(j) * ng.shape[2] + k;
                    apply_mode(spec, scr, xi, kv, wp, field.near.data() + idx, cstride,
                               out.near.data() + idx, cstride);
                }
        }
    }
    return out;
}

FourierField scale(const FourierField& field, const PrecomputedKernel0P& pre, double xi,
                   const Window& window, const GridSpec& grid) {
    if (grid.d != 0 || field.d != 0)
        throw std::invalid_argument("precomputed kernels apply to d = 0 only");
    if (field.n_zero != pre.n)
        throw std::invalid_argument("kernel table was built for a different padded grid");
    if (field.comps != strength_components(pre.kind))
        throw std::invalid_argument("field component count does not match the kernel");
    if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
    check_window(window, grid);

    const Screening scr = screening_of(pre.kind);
    const std::array<int, 3> zshape = pre.n;
    const long zvol = cells(zshape);
    std::array<std::vector<double>, 3> kz, wz;
    for (int ax = 0; ax < 3; ++ax) {
        kz[ax] = wavenumber_table(zshape[ax], grid.h);
        wz[ax] = window_table(window, kz[ax]);
    }

    FourierField out;
    out.d = 0;
    out.comps = 3;
    out.n_zero = field.n_zero;
    out.zero.assign(static_cast<std::size_t>(3) * zvol, cplx{});
    for (int i = 0; i < zshape[0]; ++i)
        for (int j = 0; j < zshape[1]; ++j)
            for (int k = 0; k < zshape[2]; ++k) {
                const Vec3 kv{kz[0][i], kz[1][j], kz[2][k]};
                const double wp = wz[0][i] * wz[1][j] * wz[2][k];
                const long idx = flat(zshape, i, j, k);
                KernelTensor G = diffop_hat(pre.kind, kv);
                const cplx fac =
                    pre.table[idx] * (screening_hat(scr, kv, xi) / (wp * wp));
                const cplx* in = field.zero.data() + idx;
                cplx* o = out.zero.data() + idx;
                if (G.rank == 2) {
                    for (int c = 0; c < 3; ++c)
                        o[static_cast<long>(c) * zvol] =
                            fac * (G.m[c][0] * in[0] + G.m[c][1] * in[zvol] +
                                   G.m[c][2] * in[2 * zvol]);
                } else {
                    for (int c = 0; c < 3; ++c) {
                        cplx acc{};
                        for (int l = 0; l < 3; ++l)
                            for (int m = 0; m < 3; ++m)
                                acc += G.t[c][l][m] * in[(3 * l + m) * zvol];
                        o[static_cast<long>(c) * zvol] = fac * acc;
                    }
                }
            }
    return out;
}

PrecomputedKernel0P precompute_0p(Kernel kind, const GridSpec& grid, double R) {
    if (grid.d != 0) throw std::invalid_argument("kernel precomputation applies to d = 0 only");
    if (!(R > 0.0)) throw std::invalid_argument("truncation radius must be positive");

    // Dense evaluation grid: the same upsampling the direct path would use,
    // rounded so every padded size is an even integer.
    long g = 0;
    double L_min = grid.L_ext[0];
    for (int ax = 0; ax < 3; ++ax) {
        if (grid.M_ext[ax] % grid.f_m != 0)
            throw std::invalid_argument("extended grid sizes must be multiples of f_m");
        g = std::gcd(g, static_cast<long>(grid.M_ext[ax] / grid.f_m));
        L_min = std::min(L_min, grid.L_ext[ax]);
    }
    double s0 = std::ceil(10.0 * (1.0 + R / L_min) - 1e-9) / 10.0;
    s0 = std::max(std::ceil(s0 * static_cast<double>(g) - 1e-9) / static_cast<double>(g), 1.0);

    std::array<int, 3> dense{};
    for (int ax = 0; ax < 3; ++ax) dense[ax] = padded_size(s0, grid.M_ext[ax]);
    const long dvol = cells(dense);
    const ModifiedKernelSpec spec = ModifiedKernelSpec::optimal(kind, 0, R);
    const bool biharmonic = kind != Kernel::rotlet;

    std::array<std::vector<double>, 3> kt;
    for (int ax = 0; ax < 3; ++ax) kt[ax] = wavenumber_table(dense[ax], grid.h);

    std::vector<cplx> box(dvol);
    for (int i = 0; i < dense[0]; ++i)
        for (int j = 0; j < dense[1]; ++j)
            for (int k = 0; k < dense[2]; ++k) {
                const double kappa = std::sqrt(kt[0][i] * kt[0][i] + kt[1][j] * kt[1][j] +
                                               kt[2][k] * kt[2][k]);
                box[flat(dense, i, j, k)] =
                    biharmonic ? biharmonic_hat_trunc_0p(kappa, R, spec.a_B, spec.b_B)
                               : harmonic_hat_trunc_0p(kappa, R);
            }
    for (int ax = 0; ax < 3; ++ax) fft_axis(box.data(), dense, ax, FFTW_BACKWARD);
    const double h3 = grid.h * grid.h * grid.h;
    const double inv = 1.0 / (h3 * static_cast<double>(dvol));

    PrecomputedKernel0P pre;
    pre.kind = kind;
    pre.R = R;
    for (int ax = 0; ax < 3; ++ax) pre.n[ax] = 2 * grid.M_ext[ax];
    const long tvol = cells(pre.n);
    pre.table.assign(tvol, cplx{});

    // Real-space truncation to the doubled box, tapered at the outer edges
    // for the biharmonic, laid out in DFT order for the final transform.
    std::array<std::vector<double>, 3> taper;
    std::array<std::vector<int>, 3> src_idx, dst_idx;
    for (int ax = 0; ax < 3; ++ax) {
        const int M2 = pre.n[ax];
        const int Me = grid.M_ext[ax];
        taper[ax].assign(M2, 1.0);
        if (biharmonic)
            for (int t = 0; t < 4; ++t) {
                taper[ax][t] = detail::mollifier_taper(3.0 - t);
                taper[ax][M2 - 1 - t] = detail::mollifier_taper(3.0 - t);
            }
        src_idx[ax].resize(M2);
        dst_idx[ax].resize(M2);
        for (int t = 0; t < M2; ++t) {
            const int x = t - Me; // grid offset from the origin
            src_idx[ax][t] = (x % dense[ax] + dense[ax]) % dense[ax];
            dst_idx[ax][t] = (x + M2) % M2;
        }
    }
    for (int i = 0; i < pre.n[0]; ++i)
        for (int j = 0; j < pre.n[1]; ++j) {
            const double tij = taper[0][i] * taper[1][j];
            for (int k = 0; k < pre.n[2]; ++k) {
                const double a =
                    box[flat(dense, src_idx[0][i], src_idx[1][j], src_idx[2][k])].real() * inv;
                pre.table[flat(pre.n, dst_idx[0][i], dst_idx[1][j], dst_idx[2][k])] =
                    a * tij * taper[2][k];
            }
        }
    for (int ax = 0; ax < 3; ++ax) fft_axis(pre.table.data(), pre.n, ax, FFTW_FORWARD);
    for (auto& v : pre.table) v *= h3;
    return pre;
}

std::vector<Vec3> se_fourier_potential(const SourceSystem& system, const TargetSet& targets,
                                       const EwaldParams& params, const SePipelineOptions& opt) {
    validate_system(system);
    if (system.kind != params.kind || system.d != params.d)
        throw std::invalid_argument("parameter set was built for a different system");
    if (!(params.xi > 0.0)) throw std::invalid_argument("xi must be positive");

    const Window window(params.window);
    const ModifiedKernelSpec spec =
        ModifiedKernelSpec::optimal(params.kind, params.d, params.d == 3 ? 1.0 : params.R);

    RealField phi = spread(system, params.grid, window);
    UpsamplingPlan plan = params.upsampling;

    FourierField scaled;
    if (params.d == 0 && opt.precompute_0p) {
        plan.s0 = 2.0;
        FourierField modes = aft_forward(phi, params.grid, plan);
        phi = RealField{};
        PrecomputedKernel0P local;
        const PrecomputedKernel0P* table = opt.table;
        if (table) {
            if (table->kind != params.kind)
                throw std::invalid_argument("kernel table was built for a different kernel");
        } else {
            local = precompute_0p(params.kind, params.grid, params.R);
            table = &local;
        }
        scaled = scale(modes, *table, params.xi, window, params.grid);
    } else {
        FourierField modes = aft_forward(phi, params.grid, plan);
        phi = RealField{};
        scaled = scale(modes, spec, params.xi, window, params.grid);
    }

    RealField flow = aft_inverse(scaled, params.grid, plan);
    scaled = FourierField{};
    std::vector<Vec3> u = gather(flow, params.grid, window, targets);

    const Vec3 corr = gauge_flow_correction(spec, system);
    if (corr[0] != 0.0 || corr[1] != 0.0 || corr[2] != 0.0)
        for (Vec3& v : u) {
            v[0] -= corr[0];
            v[1] -= corr[1];
            v[2] -= corr[2];
        }
    return u;
}

} // namespace sewald
