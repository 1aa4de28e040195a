#include "mbe/search.hpp"

#include <algorithm>
#include <queue>

namespace mbe {

MiniBucketHeuristic::MiniBucketHeuristic(const BeliefNetwork& bn, const Evidence& e,
                                         const Ordering& d, EliminationTrace trace)
    : bn_(bn), e_(e), d_(d), trace_(std::move(trace)) {
  const std::size_t n = d_.size();
  if (trace_.buckets.size() != n) {
    throw InvalidArgument("heuristic needs one bucket per ordering position");
  }
  cpts_done_.assign(n + 1, {});
  for (std::size_t v = 0; v < bn_.size(); ++v) {
    std::size_t last = 0;
    for (VarId u : bn_.cpt(static_cast<VarId>(v)).scope()) last = std::max(last, d_.position(u));
    cpts_done_[last + 1].push_back(&bn_.cpt(static_cast<VarId>(v)));
  }
  crossing_.assign(n + 1, {});
  for (const RecordedFunction& r : trace_.recorded) {
    // a constant sits below position 0
    const std::size_t lo = r.target ? *r.target + 1 : 0;
    for (std::size_t k = lo; k <= r.source; ++k) crossing_[k].push_back(&r.function);
  }
}

MiniBucketHeuristic::Value MiniBucketHeuristic::evaluate(std::span<const int> x,
                                                         std::size_t depth) const {
  Value out;
  for (std::size_t p = 0; p < depth; ++p) {
    const auto ev = e_.value(d_.at(p));
    if (ev && *ev != x[static_cast<std::size_t>(d_.at(p))]) return {0.0, 0.0};
  }
  for (std::size_t k = 1; k <= depth; ++k) {
    for (const Factor* f : cpts_done_[k]) out.g *= f->at(x);
  }
  for (const Factor* f : crossing_[depth]) out.h *= f->is_scalar() ? (*f)[0] : f->at(x);
  return out;
}

namespace {

struct Node {
  double f;
  std::vector<int> prefix;  // values in d order
};

struct WorseThan {
  bool operator()(const Node& a, const Node& b) const {
    if (a.f != b.f) return a.f < b.f;
    if (a.prefix.size() != b.prefix.size()) return a.prefix.size() < b.prefix.size();
    return a.prefix > b.prefix;
  }
};

}  // namespace

SearchResult best_first_mpe(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                            const MiniBucketConfig& cfg, const ElimOptions& opts,
                            std::size_t max_frontier) {
  ElimOptions plain = opts;
  plain.super_buckets = false;
  EliminationTrace trace;
  const BoundsResult approx = approx_mpe(bn, e, d, cfg, plain, &trace);
  const MiniBucketHeuristic heur(bn, e, d, std::move(trace));

  const std::size_t n = d.size();
  Assignment x(bn.size(), 0);
  auto load = [&](const std::vector<int>& prefix) {
    for (std::size_t p = 0; p < prefix.size(); ++p) x[static_cast<std::size_t>(d.at(p))] = prefix[p];
  };

  SearchResult out;
  std::priority_queue<Node, std::vector<Node>, WorseThan> open;
  out.heuristic_upper = heur.evaluate(x, 0).f();
  open.push({out.heuristic_upper, {}});
  out.stats.generated = 1;
  out.stats.peak_frontier = 1;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    out.popped_f.push_back(node.f);
    load(node.prefix);
    if (node.prefix.size() == n) {
      out.assignment = x;
      out.value = joint_probability(bn, x, e);
      return out;
    }
    ++out.stats.expanded;
    const std::size_t depth = node.prefix.size();
    const VarId v = d.at(depth);
    const auto ev = e.value(v);
    const int lo = ev ? *ev : 0;
    const int hi = ev ? *ev + 1 : bn.cardinality(v);
    for (int val = lo; val < hi; ++val) {
      Node child{0.0, node.prefix};
      child.prefix.push_back(val);
      x[static_cast<std::size_t>(v)] = val;
      // pathmax keeps f monotone along every path
      child.f = std::min(node.f, heur.evaluate(x, depth + 1).f());
      open.push(std::move(child));
      ++out.stats.generated;
    }
    out.stats.peak_frontier = std::max(out.stats.peak_frontier, open.size());
    if (open.size() > max_frontier) throw SearchExhausted(max_frontier, approx.lower, approx.tuple);
  }
  throw InvalidArgument("search frontier emptied without a complete assignment");
}

}  // namespace mbe
