#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mbe/buckets.hpp"
#include "mbe/factor.hpp"
#include "mbe/graph.hpp"
#include "mbe/kernels.hpp"
#include "mbe/network.hpp"

namespace mbe {

struct ElimOptions {
  std::size_t max_cells = kDefaultMaxCells;
  kernels::Mode kernel = kernels::Mode::parallel;
  /// Group consecutive same-family buckets (mpe engines only).
  bool super_buckets = false;
};

/// A function generated while processing bucket `source`.
struct RecordedFunction {
  std::size_t source = 0;
  std::optional<std::size_t> target;  // empty: folded into the global constant
  bool restricted = false;            // produced by an observed bucket
  Factor function;
};

/// What a backward pass left behind. Bucket indices follow the bucket list,
/// which equals ordering positions unless super-buckets were formed.
struct EliminationTrace {
  std::vector<Bucket> buckets;  // initial contents
  std::vector<RecordedFunction> recorded;
  std::size_t max_family = 0;        // F_i
  std::size_t max_arity = 0;         // F_o
  std::size_t max_mini_buckets = 0;  // mb
  double elapsed = 0.0;              // seconds

  /// Original plus received functions of bucket b.
  std::vector<const Factor*> contents(std::size_t b) const;
  /// Recorded functions generated by non-observed buckets.
  std::vector<const RecordedFunction*> generated() const;
};

struct MpeResult {
  double value = 0.0;
  Assignment assignment;
  bool evidence_impossible = false;
  EliminationTrace trace;
};

struct BelResult {
  Factor joint;  // P(query, e)
  double p_evidence = 0.0;
  bool evidence_impossible = false;
  EliminationTrace trace;

  /// joint / p_evidence; empty when the evidence is impossible.
  std::vector<double> posterior() const;
};

struct MapResult {
  double value = 0.0;  // max over hypotheses of P(a, e)
  std::vector<VarId> hyp;
  std::vector<int> hyp_values;  // aligned with `hyp`
  double p_evidence = 0.0;
  bool evidence_impossible = false;
  EliminationTrace trace;

  double posterior() const { return p_evidence > 0.0 ? value / p_evidence : 0.0; }
};

MpeResult elim_mpe(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                   const ElimOptions& opts = {});

/// Requires `query` at position 0 of d.
BelResult elim_bel(const BeliefNetwork& bn, const Evidence& e, const Ordering& d, VarId query,
                   const ElimOptions& opts = {});

/// Requires the hypothesis variables in the first |hyp| positions of d.
MapResult elim_map(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                   std::vector<VarId> hyp, const ElimOptions& opts = {});

/// P(e) by summing out every variable along d.
double probability_of_evidence(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                               const ElimOptions& opts = {});

/// Ordering with `first` (in the given order) at the front followed by the
/// remaining variables in their relative order in `base`.
Ordering move_to_front(const Ordering& base, const std::vector<VarId>& first);

}  // namespace mbe
