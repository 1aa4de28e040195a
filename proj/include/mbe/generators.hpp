#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mbe/network.hpp"

namespace mbe {

enum class NetworkKind { uniform, noisy_or };
const char* to_string(NetworkKind kind);

struct GenSpec {
  std::size_t n = 0;
  std::size_t e = 0;
  int cardinality = 2;
  NetworkKind kind = NetworkKind::uniform;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on n = 0, too many edges, cardinality < 2, or a
  /// non-binary noisy-OR request.
  void validate() const;
};

/// mt19937_64 with portable uniform draws (the std distributions are not
/// reproducible across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform in (0, 1).
  double uniform();
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[below(k)]);
  }

 private:
  std::mt19937_64 eng_;
};

/// parents[v], ascending.
using Dag = std::vector<std::vector<VarId>>;

/// Exactly spec.e edges, each from a lower to a higher position of a random
/// rank permutation.
Dag gen_graph(const GenSpec& spec, Rng& rng);
BeliefNetwork gen_uniform_cpts(const Dag& dag, const GenSpec& spec, Rng& rng);
/// Leak-free noisy-OR: P(child = 0 | pa) = product of q_k over parents equal to 1.
BeliefNetwork gen_noisy_or_cpts(const Dag& dag, const GenSpec& spec, Rng& rng);

/// Graph then CPTs from one stream seeded with spec.seed.
BeliefNetwork generate(const GenSpec& spec);

/// Random binary poly-tree with uniform CPTs: each variable past the first is
/// linked to a random earlier one, as its parent or its child, keeping every
/// parent set within max_parents.
BeliefNetwork gen_polytree(std::size_t n, std::size_t max_parents, std::uint64_t seed);

enum class EvidencePolicy { positive_ones, sampled };
const char* to_string(EvidencePolicy p);

Evidence gen_evidence(const BeliefNetwork& bn, std::size_t count, EvidencePolicy policy,
                      std::uint64_t seed);

/// Full assignment by forward sampling along the topological order.
Assignment forward_sample(const BeliefNetwork& bn, Rng& rng);

}  // namespace mbe
