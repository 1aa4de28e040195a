#pragma once

// Fused product + elimination kernels. Every bucket operation in the engines
// funnels through combine_eliminate, which computes
//
//   out(u) = AGG_{e over elim vars} prod_k f_k(u, e)
//
// directly, without materialising the joint product table.

#include <cstddef>
#include <span>

#include "mbe/factor.hpp"

namespace mbe::kernels {

enum class Mode {
  reference,  // naive full decode per cell, single thread; kept for testing
  serial,     // odometer kernel, single thread
  parallel,   // odometer kernel, output cells split across OpenMP threads
};

const char* to_string(Mode mode);

/// Output cell count below which the parallel kernel stays single threaded.
inline constexpr std::size_t kParallelThreshold = 1 << 12;

/// Product of `factors` with the variables in `elim` (intersected with the
/// union scope) aggregated out by `op`. Throws ResourceError when the output
/// table would exceed `max_cells`, InvalidArgument on cardinality conflicts.
Factor combine_eliminate(std::span<const Factor* const> factors, std::span<const VarId> elim,
                         ElimOp op, Mode mode = Mode::parallel,
                         std::size_t max_cells = kDefaultMaxCells);

}  // namespace mbe::kernels
