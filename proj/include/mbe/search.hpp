#pragma once

#include <cstddef>
#include <vector>

#include "mbe/error.hpp"
#include "mbe/minibucket.hpp"

namespace mbe {

/// f = g * h for prefixes of d, built from a mini-bucket trace along d.
/// g multiplies the CPTs fully instantiated by the prefix; h multiplies the
/// recorded functions generated at or beyond the frontier that landed in
/// buckets before it.
class MiniBucketHeuristic {
 public:
  /// `trace` must come from a run along d without super-buckets.
  MiniBucketHeuristic(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                      EliminationTrace trace);

  struct Value {
    double g = 1.0;
    double h = 1.0;
    double f() const { return g * h; }
  };

  /// `x` holds values for the variables at positions [0, depth) of d; the
  /// rest are ignored. A prefix that contradicts the evidence scores 0.
  Value evaluate(std::span<const int> x, std::size_t depth) const;

  const Ordering& ordering() const noexcept { return d_; }

 private:
  const BeliefNetwork& bn_;
  const Evidence& e_;
  Ordering d_;
  EliminationTrace trace_;
  std::vector<std::vector<const Factor*>> cpts_done_;  // per depth k: CPTs whose last var sits at k-1
  std::vector<std::vector<const Factor*>> crossing_;   // per depth k
};

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t peak_frontier = 0;
};

struct SearchResult {
  double value = 0.0;
  Assignment assignment;
  SearchStats stats;
  std::vector<double> popped_f;  // f of every popped node, in pop order
  double heuristic_upper = 0.0;  // f of the empty prefix
};

/// Raised when the frontier outgrows its cap.
class SearchExhausted : public ResourceError {
 public:
  SearchExhausted(std::size_t frontier, double lower, Assignment tuple)
      : ResourceError("search frontier exceeded " + std::to_string(frontier) + " nodes", frontier),
        lower_(lower),
        tuple_(std::move(tuple)) {}
  double best_lower() const noexcept { return lower_; }
  const Assignment& best_tuple() const noexcept { return tuple_; }

 private:
  double lower_;
  Assignment tuple_;
};

inline constexpr std::size_t kDefaultMaxFrontier = std::size_t{1} << 22;

/// Best-first search for the mpe guided by approx-mpe(cfg) functions along d.
/// Nodes leave the frontier by decreasing f, deeper first on ties, then
/// lexicographically smallest prefix.
SearchResult best_first_mpe(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                            const MiniBucketConfig& cfg, const ElimOptions& opts = {},
                            std::size_t max_frontier = kDefaultMaxFrontier);

}  // namespace mbe
