#include "sewald/realspace.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "sewald/kernels.h"

namespace sewald {

namespace {

std::size_t bucket_id(const CellList& cl, int ix, int iy, int iz) {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(cl.n[0]) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(cl.n[1]) * iz);
}

// One neighbor step along an axis: the wrapped subcell plus the image offset
// its sources must be translated by.
struct NeighborStep {
    int j = 0;
    double shift = 0.0;
    bool primary = true;
};

void accumulate_rows(const SourceSystem& system, const TargetSet& targets, const CellList& cl,
                     double xi, bool skip_self, std::size_t t0, std::size_t t1,
                     std::vector<Vec3>& u) {
    const bool pair_strength = system.kind == Kernel::stresslet;
    const double rc2 = cl.rc * cl.rc;
    std::array<std::vector<NeighborStep>, 3> steps;
    for (auto& s : steps) s.reserve(2 * std::max({cl.reach[0], cl.reach[1], cl.reach[2]}) + 1);

    for (std::size_t t = t0; t < t1; ++t) {
        if (!std::isfinite(targets.x[t][0]) || !std::isfinite(targets.x[t][1]) ||
            !std::isfinite(targets.x[t][2]))
            throw std::invalid_argument("target coordinates must be finite");
        const Vec3 xt = wrap_position(targets.x[t], cl.cell, cl.d);

        bool far_outside = false;
        for (int ax = 0; ax < 3; ++ax) {
            auto& cand = steps[ax];
            cand.clear();
            const double pos = std::floor((xt[ax] - cl.origin[ax]) / cl.width[ax]);
            if (ax < cl.d) {
                const int base = std::clamp(static_cast<int>(pos), 0, cl.n[ax] - 1);
                for (int c = base - cl.reach[ax]; c <= base + cl.reach[ax]; ++c) {
                    int j = c % cl.n[ax];
                    if (j < 0) j += cl.n[ax];
                    const int s = (c - j) / cl.n[ax];
                    cand.push_back({j, s * cl.cell.L[ax], s == 0});
                }
            } else {
                if (pos + cl.reach[ax] < 0.0 || pos - cl.reach[ax] > cl.n[ax] - 1.0) {
                    far_outside = true;
                    break;
                }
                const int base = static_cast<int>(pos);
                const int lo = std::max(0, base - cl.reach[ax]);
                const int hi = std::min(cl.n[ax] - 1, base + cl.reach[ax]);
                for (int c = lo; c <= hi; ++c) cand.push_back({c, 0.0, true});
            }
        }
        if (far_outside) {
            u[t] = Vec3{};
            continue;
        }

        Vec3 acc{};
        for (const auto& sz : steps[2])
            for (const auto& sy : steps[1])
                for (const auto& sx : steps[0]) {
                    const std::size_t b = bucket_id(cl, sx.j, sy.j, sz.j);
                    const bool primary_image = sx.primary && sy.primary && sz.primary;
                    for (std::size_t p = cl.offset[b]; p < cl.offset[b + 1]; ++p) {
                        const std::size_t i = cl.index[p];
                        const Vec3 r{xt[0] - cl.folded[i][0] - sx.shift,
                                     xt[1] - cl.folded[i][1] - sy.shift,
                                     xt[2] - cl.folded[i][2] - sz.shift};
                        if (norm2(r) >= rc2) continue;
                        if (skip_self && primary_image && i == t) continue;
                        const KernelTensorR G = realspace_kernel(system.kind, r, xi);
                        acc += pair_strength ? sewald::apply(G, system.f[i], system.nu[i])
                                             : sewald::apply(G, system.f[i]);
                    }
                }
        u[t] = acc;
    }
}

} // namespace

CellList build_cell_list(const SourceSystem& system, double rc) {
    if (!(rc > 0.0)) throw std::invalid_argument("cell list cutoff must be positive");
    validate_system(system);

    CellList cl;
    cl.rc = rc;
    cl.d = system.d;
    cl.cell = system.cell;

    const std::size_t n_src = system.size();
    cl.folded.resize(n_src);
    for (std::size_t i = 0; i < n_src; ++i)
        cl.folded[i] = wrap_position(system.x[i], system.cell, system.d);

    std::array<double, 3> span{};
    for (int ax = 0; ax < 3; ++ax) {
        if (ax < system.d) {
            span[ax] = system.cell.L[ax];
            cl.origin[ax] = 0.0;
        } else {
            double lo = 0.0;
            double hi = 0.0;
            if (n_src > 0) {
                lo = hi = cl.folded[0][ax];
                for (std::size_t i = 1; i < n_src; ++i) {
                    lo = std::min(lo, cl.folded[i][ax]);
                    hi = std::max(hi, cl.folded[i][ax]);
                }
            }
            span[ax] = hi - lo;
            cl.origin[ax] = lo;
        }
        cl.n[ax] = std::max(1, static_cast<int>(std::floor(span[ax] / rc)));
    }

    // Keep the bucket table bounded; wider subcells only cost extra scanning.
    const std::size_t max_buckets = std::size_t{1} << 22;
    while (static_cast<std::size_t>(cl.n[0]) * cl.n[1] * cl.n[2] > max_buckets) {
        const int ax = static_cast<int>(std::max_element(cl.n.begin(), cl.n.end()) - cl.n.begin());
        cl.n[ax] = (cl.n[ax] + 1) / 2;
    }

    for (int ax = 0; ax < 3; ++ax) {
        cl.width[ax] = ax < system.d ? system.cell.L[ax] / cl.n[ax]
                                     : std::max(span[ax] / cl.n[ax], rc);
        cl.reach[ax] = static_cast<int>(std::ceil(rc / cl.width[ax]));
        while (cl.reach[ax] * cl.width[ax] < rc) ++cl.reach[ax];
    }

    const std::size_t n_buckets =
        static_cast<std::size_t>(cl.n[0]) * cl.n[1] * cl.n[2];
    cl.offset.assign(n_buckets + 1, 0);
    std::vector<std::size_t> home(n_src);
    for (std::size_t i = 0; i < n_src; ++i) {
        int c[3];
        for (int ax = 0; ax < 3; ++ax) {
            const double pos = std::floor((cl.folded[i][ax] - cl.origin[ax]) / cl.width[ax]);
            c[ax] = std::clamp(static_cast<int>(pos), 0, cl.n[ax] - 1);
        }
        home[i] = bucket_id(cl, c[0], c[1], c[2]);
        ++cl.offset[home[i] + 1];
    }
    std::partial_sum(cl.offset.begin(), cl.offset.end(), cl.offset.begin());
    cl.index.resize(n_src);
    std::vector<std::size_t> cursor(cl.offset.begin(), cl.offset.end() - 1);
    for (std::size_t i = 0; i < n_src; ++i) cl.index[cursor[home[i]]++] = i;
    return cl;
}

std::vector<Vec3> realspace_potential(const SourceSystem& system, const TargetSet& targets,
                                      double xi, double rc, bool starred, int n_threads) {
    if (!(xi > 0.0)) throw std::invalid_argument("split parameter must be positive");
    const bool skip_self = starred && targets.same_as_sources;
    if (skip_self && targets.x.size() != system.size())
        throw std::invalid_argument("starred evaluation needs one target per source");

    const CellList cl = build_cell_list(system, rc);
    const std::size_t n_t = targets.x.size();
    std::vector<Vec3> u(n_t, Vec3{});

    const std::size_t workers =
        std::min<std::size_t>(std::max(n_threads, 1), std::max<std::size_t>(n_t, 1));
    if (workers <= 1) {
        accumulate_rows(system, targets, cl, xi, skip_self, 0, n_t, u);
        return u;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n_t + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t t0 = w * chunk;
        const std::size_t t1 = std::min(n_t, t0 + chunk);
        if (t0 >= t1) break;
        pool.emplace_back([&, t0, t1, w] {
            try {
                accumulate_rows(system, targets, cl, xi, skip_self, t0, t1, u);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return u;
}

std::vector<Vec3> full_potential(const SourceSystem& system, const TargetSet& targets,
                                 const EwaldParams& params, const SePipelineOptions& opt) {
    std::vector<Vec3> u =
        realspace_potential(system, targets, params.xi, params.rc, targets.same_as_sources);
    const std::vector<Vec3> far = se_fourier_potential(system, targets, params, opt);
    for (std::size_t t = 0; t < u.size(); ++t) u[t] += far[t];
    if (targets.same_as_sources)
        for (std::size_t t = 0; t < u.size(); ++t)
            u[t] += self_term(system.kind, params.xi, system.f[t]);
    if (system.kind == Kernel::stresslet && params.d == 3) {
        const std::vector<Vec3> mean = stresslet_zero_mode_3p(targets, system);
        for (std::size_t t = 0; t < u.size(); ++t) u[t] += mean[t];
    }
    return u;
}

} // namespace sewald
