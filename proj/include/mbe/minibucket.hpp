#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mbe/elimination.hpp"

namespace mbe {

/// Blocks of factor indices; a disjoint cover of one bucket's factors.
using Partitioning = std::vector<std::vector<std::size_t>>;

enum class PartitionStrategy { by_m, by_i };
const char* to_string(PartitionStrategy s);

struct MiniBucketConfig {
  static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

  /// Max variables per mini-bucket besides the eliminated one(s), i.e. the
  /// arity bound of every recorded function.
  std::size_t i = unbounded;
  /// Max nonsubsumed functions (canonical blocks) per mini-bucket.
  std::size_t m = unbounded;
  PartitionStrategy strategy = PartitionStrategy::by_i;
  /// Throw InfeasibleConfig when a single canonical block already exceeds i,
  /// instead of keeping it as its own mini-bucket.
  bool strict = false;

  static MiniBucketConfig by_i(std::size_t i, std::size_t m = unbounded) {
    return {i, m, PartitionStrategy::by_i, false};
  }
  static MiniBucketConfig by_m(std::size_t m, std::size_t i = unbounded) {
    return {i, m, PartitionStrategy::by_m, false};
  }
  static MiniBucketConfig full() { return {}; }

  /// Throws InfeasibleConfig when i or m is zero.
  void validate() const;
};

/// Groups every subsumed factor with its earliest subsumer. A factor is
/// subsumed by a proper superset scope, or by an equal scope earlier in the
/// bucket. Blocks are ordered by their nonsubsumed head.
Partitioning canonical_partition(std::span<const Scope> scopes);

/// Coarsens a canonical partitioning under cfg. `bucket_vars` are the
/// variables being eliminated and do not count against i.
Partitioning im_partition(const Partitioning& canonical, const MiniBucketConfig& cfg,
                          std::span<const Scope> scopes, std::span<const VarId> bucket_vars);

/// True when every block of qa lies inside some block of qb. Throws
/// InvalidArgument when the two cover different index sets.
bool is_refinement(const Partitioning& qa, const Partitioning& qb);

/// One max-eliminated output per mini-bucket.
std::vector<Factor> process_bucket_max(std::span<const Factor* const> factors,
                                       std::span<const VarId> vars, const Partitioning& q,
                                       const ElimOptions& opts = {});

enum class BoundMode { upper, lower, mean };
const char* to_string(BoundMode mode);

/// q[0] is summed; the other mini-buckets use max (upper), min (lower) or
/// mean.
std::vector<Factor> process_bucket_sum_guarded(std::span<const Factor* const> factors,
                                               std::span<const VarId> vars, const Partitioning& q,
                                               BoundMode mode, const ElimOptions& opts = {});

struct Diagnostics {
  std::size_t mb = 0;   // most mini-buckets in one bucket
  std::size_t fi = 0;   // largest input family
  std::size_t fo = 0;   // largest recorded arity
  double elapsed = 0.0; // seconds
};

struct BoundsResult {
  double upper = 0.0;
  double lower = 0.0;
  bool has_lower = true;
  /// Greedy forward tuple. For map only the hypothesis and evidence
  /// entries are meaningful.
  Assignment tuple;
  Diagnostics diag;
};

BoundsResult approx_mpe(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                        const MiniBucketConfig& cfg, const ElimOptions& opts = {},
                        EliminationTrace* trace = nullptr);

struct BelBound {
  Factor bound;  // over {query}
  double p_evidence_bound = 0.0;
  BoundMode mode = BoundMode::upper;
  Diagnostics diag;
};

/// Requires `query` first in d. Mean mode is an estimate, not a bound.
BelBound approx_bel(const BeliefNetwork& bn, const Evidence& e, const Ordering& d, VarId query,
                    const MiniBucketConfig& cfg, BoundMode mode, const ElimOptions& opts = {},
                    EliminationTrace* trace = nullptr);

/// Upper bound on max_a P(a, e). The lower bound is P(a, e) of the forward
/// hypothesis, computed exactly; has_lower is false when that runs out of
/// memory.
BoundsResult approx_map(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                        const std::vector<VarId>& hyp, const MiniBucketConfig& cfg,
                        const ElimOptions& opts = {}, EliminationTrace* trace = nullptr);

/// The partitioning approx_* would use on one bucket's contents. For
/// sum-guarded buckets the block holding `own_cpt` (if any) is moved first.
Partitioning bucket_partition(std::span<const Factor* const> factors, std::span<const VarId> vars,
                              const MiniBucketConfig& cfg,
                              std::optional<std::size_t> own_cpt = std::nullopt);

struct Ratios {
  double ml;  // exact / lower
  double um;  // upper / exact
  double ul;  // upper / lower
};

/// NaN where exact is missing; +inf on a zero denominator; 0/0 counts as 1.
Ratios bound_ratios(std::optional<double> exact, double upper, double lower);

}  // namespace mbe
