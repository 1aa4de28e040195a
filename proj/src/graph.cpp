#include "mbe/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "mbe/error.hpp"

namespace mbe {

void UndirectedGraph::add_edge(VarId a, VarId b) {
  if (a == b) return;
  adj_.at(static_cast<std::size_t>(a)).insert(b);
  adj_.at(static_cast<std::size_t>(b)).insert(a);
}

bool UndirectedGraph::has_edge(VarId a, VarId b) const {
  return adj_.at(static_cast<std::size_t>(a)).count(b) != 0;
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& s : adj_) m += s.size();
  return m / 2;
}

std::vector<std::pair<VarId, VarId>> UndirectedGraph::edges() const {
  std::vector<std::pair<VarId, VarId>> out;
  for (std::size_t a = 0; a < adj_.size(); ++a) {
    for (VarId b : adj_[a]) {
      if (static_cast<VarId>(a) < b) out.emplace_back(static_cast<VarId>(a), b);
    }
  }
  return out;
}

Ordering::Ordering(std::vector<VarId> order) : order_(std::move(order)), pos_(order_.size()) {
  std::vector<bool> seen(order_.size(), false);
  for (std::size_t p = 0; p < order_.size(); ++p) {
    VarId v = order_[p];
    if (v < 0 || static_cast<std::size_t>(v) >= order_.size() || seen[static_cast<std::size_t>(v)]) {
      throw InvalidArgument("ordering is not a permutation of 0.." + std::to_string(order_.size() - 1));
    }
    seen[static_cast<std::size_t>(v)] = true;
    pos_[static_cast<std::size_t>(v)] = p;
  }
}

std::string Ordering::str() const {
  std::ostringstream os;
  for (std::size_t p = 0; p < order_.size(); ++p) os << (p ? " " : "") << order_[p];
  return os.str();
}

UndirectedGraph moral_graph(const BeliefNetwork& bn) {
  UndirectedGraph g(bn.size());
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const auto& pa = bn.parents(static_cast<VarId>(v));
    for (std::size_t a = 0; a < pa.size(); ++a) {
      g.add_edge(pa[a], static_cast<VarId>(v));
      for (std::size_t b = a + 1; b < pa.size(); ++b) g.add_edge(pa[a], pa[b]);
    }
  }
  return g;
}

UndirectedGraph interaction_graph(std::size_t n, std::span<const Factor> factors) {
  UndirectedGraph g(n);
  for (const Factor& f : factors) {
    const auto& s = f.scope();
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b < s.size(); ++b) g.add_edge(s[a], s[b]);
    }
  }
  return g;
}

Widths induced_width(const UndirectedGraph& g, const Ordering& d) {
  if (d.size() != g.size()) throw InvalidArgument("ordering size differs from graph size");
  Widths w;
  for (std::size_t v = 0; v < g.size(); ++v) {
    std::size_t earlier = 0;
    for (VarId u : g.neighbors(static_cast<VarId>(v))) {
      if (d.position(u) < d.position(static_cast<VarId>(v))) ++earlier;
    }
    w.width = std::max(w.width, earlier);
  }
  std::vector<std::set<VarId>> adj(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) adj[v] = g.neighbors(static_cast<VarId>(v));
  for (std::size_t p = d.size(); p-- > 0;) {
    const VarId v = d.at(p);
    std::vector<VarId> earlier;
    for (VarId u : adj[static_cast<std::size_t>(v)]) {
      if (d.position(u) < p) earlier.push_back(u);
    }
    w.induced_width = std::max(w.induced_width, earlier.size());
    for (std::size_t a = 0; a < earlier.size(); ++a) {
      for (std::size_t b = a + 1; b < earlier.size(); ++b) {
        adj[static_cast<std::size_t>(earlier[a])].insert(earlier[b]);
        adj[static_cast<std::size_t>(earlier[b])].insert(earlier[a]);
      }
    }
  }
  return w;
}

namespace {

std::size_t fill_in(const std::vector<std::set<VarId>>& adj, VarId v) {
  const auto& nb = adj[static_cast<std::size_t>(v)];
  std::size_t missing = 0;
  for (auto a = nb.begin(); a != nb.end(); ++a) {
    for (auto b = std::next(a); b != nb.end(); ++b) {
      if (!adj[static_cast<std::size_t>(*a)].count(*b)) ++missing;
    }
  }
  return missing;
}

}  // namespace

Ordering find_ordering(const UndirectedGraph& g, OrderingStrategy strategy) {
  const std::size_t n = g.size();
  std::vector<VarId> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  if (strategy == OrderingStrategy::given) return Ordering(identity);

  std::vector<std::set<VarId>> adj(n);
  for (std::size_t v = 0; v < n; ++v) adj[v] = g.neighbors(static_cast<VarId>(v));
  std::vector<bool> gone(n, false);
  std::vector<VarId> order(n);

  for (std::size_t slot = n; slot-- > 0;) {
    VarId best = -1;
    std::size_t best_score = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = n; v-- > 0;) {  // descending so the highest id wins ties
      if (gone[v]) continue;
      const std::size_t score = strategy == OrderingStrategy::min_degree
                                    ? adj[v].size()
                                    : fill_in(adj, static_cast<VarId>(v));
      if (score < best_score) {
        best_score = score;
        best = static_cast<VarId>(v);
      }
    }
    const auto b = static_cast<std::size_t>(best);
    std::vector<VarId> nb(adj[b].begin(), adj[b].end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      adj[static_cast<std::size_t>(nb[i])].erase(best);
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[static_cast<std::size_t>(nb[i])].insert(nb[j]);
        adj[static_cast<std::size_t>(nb[j])].insert(nb[i]);
      }
    }
    adj[b].clear();
    gone[b] = true;
    order[slot] = best;
  }
  return Ordering(std::move(order));
}

bool is_polytree(const BeliefNetwork& bn) {
  std::vector<std::size_t> parent(bn.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t v = 0; v < bn.size(); ++v) {
    for (VarId p : bn.parents(static_cast<VarId>(v))) {
      std::size_t a = find(v), b = find(static_cast<std::size_t>(p));
      if (a == b) return false;
      parent[a] = b;
    }
  }
  return true;
}

Ordering legal_ordering(const BeliefNetwork& bn, const Evidence& e) {
  if (!is_polytree(bn)) throw InvalidArgument("legal orderings are defined for poly-trees only");
  e.validate(bn);
  const std::size_t n = bn.size();
  std::vector<bool> placed(n, false);
  std::vector<VarId> order;
  order.reserve(n);

  auto ready = [&](VarId v) {
    if (placed[static_cast<std::size_t>(v)] || e.observed(v)) return false;
    const auto& ch = bn.children(v);
    return std::all_of(ch.begin(), ch.end(), [&](VarId c) {
      return placed[static_cast<std::size_t>(c)] || e.observed(c);
    });
  };

  std::size_t unobserved = 0;
  for (std::size_t v = 0; v < n; ++v) unobserved += e.observed(static_cast<VarId>(v)) ? 0 : 1;

  std::vector<VarId> pending;  // co-parents still to be placed next to each other
  while (order.size() < unobserved) {
    VarId pick = -1;
    for (VarId c : pending) {
      if (ready(c)) {
        pick = c;
        break;
      }
    }
    if (pick < 0) {
      pending.clear();
      for (std::size_t v = 0; v < n; ++v) {
        if (ready(static_cast<VarId>(v))) {
          pick = static_cast<VarId>(v);
          break;
        }
      }
    }
    // a poly-tree is acyclic, so some unplaced variable is always ready
    placed[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    pending.erase(std::remove(pending.begin(), pending.end(), pick), pending.end());

    if (pending.empty()) {
      // open the family of the lowest-id child that still has unplaced co-parents
      for (VarId c : bn.children(pick)) {
        if (e.observed(c)) continue;
        for (VarId p : bn.parents(c)) {
          if (!placed[static_cast<std::size_t>(p)] && !e.observed(p)) pending.push_back(p);
        }
        if (!pending.empty()) break;
      }
    }
  }
  for (auto [v, value] : e.values()) {
    (void)value;
    order.push_back(v);
  }
  return Ordering(std::move(order));
}

LegalityReport check_legal(const BeliefNetwork& bn, const Evidence& e, const Ordering& d) {
  LegalityReport r;
  const std::size_t n = bn.size();
  const std::size_t first_observed = n - e.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (e.observed(d.at(p)) != (p >= first_observed)) r.observed_last = false;
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto c = static_cast<VarId>(v);
    if (e.observed(c)) continue;
    std::vector<std::size_t> pos;
    for (VarId p : bn.parents(c)) {
      if (e.observed(p)) continue;
      if (d.position(p) < d.position(c)) r.children_first = false;
      pos.push_back(d.position(p));
    }
    if (!pos.empty()) {
      auto [lo, hi] = std::minmax_element(pos.begin(), pos.end());
      if (*hi - *lo + 1 != pos.size()) r.parents_consecutive = false;
    }
  }
  return r;
}

}  // namespace mbe
