#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mbe/factor.hpp"
#include "mbe/network.hpp"

namespace mbe {

class UndirectedGraph {
 public:
  explicit UndirectedGraph(std::size_t n = 0) : adj_(n) {}

  std::size_t size() const noexcept { return adj_.size(); }
  /// Self-loops are ignored.
  void add_edge(VarId a, VarId b);
  bool has_edge(VarId a, VarId b) const;
  const std::set<VarId>& neighbors(VarId v) const { return adj_.at(static_cast<std::size_t>(v)); }
  std::size_t degree(VarId v) const { return neighbors(v).size(); }
  std::size_t edge_count() const;
  /// Edges as (low, high) pairs in ascending order.
  std::vector<std::pair<VarId, VarId>> edges() const;

 private:
  std::vector<std::set<VarId>> adj_;
};

/// A permutation of the variables. Position 0 is the first variable of d;
/// elimination processes the last position first.
class Ordering {
 public:
  Ordering() = default;
  /// Throws InvalidArgument unless `order` is a permutation of 0..n-1.
  explicit Ordering(std::vector<VarId> order);

  std::size_t size() const noexcept { return order_.size(); }
  VarId at(std::size_t position) const { return order_.at(position); }
  std::size_t position(VarId v) const { return pos_.at(static_cast<std::size_t>(v)); }
  const std::vector<VarId>& order() const noexcept { return order_; }
  std::string str() const;

  bool operator==(const Ordering& o) const { return order_ == o.order_; }

 private:
  std::vector<VarId> order_;
  std::vector<std::size_t> pos_;
};

struct Widths {
  std::size_t width = 0;          // w(d)
  std::size_t induced_width = 0;  // w*(d)
};

enum class OrderingStrategy { min_degree, min_fill, given };

UndirectedGraph moral_graph(const BeliefNetwork& bn);

/// Interaction graph of an arbitrary factor set: a clique per scope.
UndirectedGraph interaction_graph(std::size_t n, std::span<const Factor> factors);

Widths induced_width(const UndirectedGraph& g, const Ordering& d);

/// Greedy min-degree / min-fill. The first-eliminated variable is placed
/// last; among tied candidates the highest id is eliminated first, so lower
/// ids land earlier in d. `given` returns the identity permutation.
Ordering find_ordering(const UndirectedGraph& g, OrderingStrategy strategy);

/// True iff the DAG's underlying undirected graph is a forest.
bool is_polytree(const BeliefNetwork& bn);

/// Ordering for poly-trees: observed variables last, every unobserved child
/// before its parents, co-parents of a family placed consecutively whenever
/// the first two constraints allow it. Throws InvalidArgument on non-poly-trees.
Ordering legal_ordering(const BeliefNetwork& bn, const Evidence& e);

/// Checks the three legal-ordering conditions; returns which ones hold.
struct LegalityReport {
  bool observed_last = true;
  bool children_first = true;
  bool parents_consecutive = true;
};
LegalityReport check_legal(const BeliefNetwork& bn, const Evidence& e, const Ordering& d);

}  // namespace mbe
