#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sewald/domain.h"
#include "sewald/estimates.h"
#include "sewald/fourier.h"

namespace sewald {

// Uniform subcell decomposition used to enumerate every source image within
// the cutoff of a target. Periodic axes wrap, carrying an image shift per
// subcell step; free axes tile the bounding slab of the sources. When the
// cutoff exceeds a periodic cell length, that axis keeps a single subcell and
// `reach` grows to span the required image shells.
struct CellList {
    double rc = 0.0;
    int d = 3;
    Cell cell;
    std::array<int, 3> n{1, 1, 1};      // subcells per axis
    std::array<double, 3> width{};      // subcell extent per axis
    std::array<double, 3> origin{};     // lower corner, zero on periodic axes
    std::array<int, 3> reach{1, 1, 1};  // neighbor offsets scanned per axis
    std::vector<std::size_t> offset;    // bucket starts, size n0*n1*n2 + 1
    std::vector<std::size_t> index;     // source ids grouped by subcell
    std::vector<Vec3> folded;           // source positions wrapped into the cell

    std::size_t bucket_count() const { return offset.empty() ? 0 : offset.size() - 1; }
};

CellList build_cell_list(const SourceSystem& system, double rc);

// Short-range Ewald sum over every periodic image closer than rc to each
// target. With starred set and targets taken from the sources, each source's
// own zero-image term is skipped; otherwise a target sitting exactly on a
// source is an error. Rows are independent, so n_threads > 1 splits the
// targets across worker threads.
std::vector<Vec3> realspace_potential(const SourceSystem& system, const TargetSet& targets,
                                      double xi, double rc, bool starred, int n_threads = 1);

// Complete potential: short-range sum, spectral long-range part, the self
// interaction when targets coincide with sources, and the mean-flow term of
// the fully periodic stresslet.
std::vector<Vec3> full_potential(const SourceSystem& system, const TargetSet& targets,
                                 const EwaldParams& params, const SePipelineOptions& opt = {});

} // namespace sewald
