#include "mbe/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "mbe/error.hpp"

namespace mbe {

BeliefNetwork::BeliefNetwork(Domains domains, std::vector<std::vector<VarId>> parents,
                             std::vector<Factor> cpts)
    : domains_(std::move(domains)), parents_(std::move(parents)), cpts_(std::move(cpts)) {
  const std::size_t n = domains_.size();
  if (parents_.size() != n || cpts_.size() != n) {
    throw InvalidArgument("network needs one parent list and one CPT per variable");
  }
  children_.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    auto& pa = parents_[v];
    std::sort(pa.begin(), pa.end());
    if (std::adjacent_find(pa.begin(), pa.end()) != pa.end()) {
      throw InvalidArgument("variable " + std::to_string(v) + " lists a parent twice");
    }
    for (VarId p : pa) {
      if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == v) {
        throw InvalidArgument("variable " + std::to_string(v) + " has invalid parent " + std::to_string(p));
      }
      children_[static_cast<std::size_t>(p)].push_back(static_cast<VarId>(v));
    }
    Scope expected = pa;
    expected.insert(std::upper_bound(expected.begin(), expected.end(), static_cast<VarId>(v)),
                    static_cast<VarId>(v));
    const Factor& f = cpts_[v];
    if (f.scope() != expected) {
      throw InvalidArgument("CPT of variable " + std::to_string(v) + " has scope " + f.describe() +
                            ", expected parents plus child");
    }
    for (std::size_t k = 0; k < f.arity(); ++k) {
      if (f.cards()[k] != domains_.cardinality(f.scope()[k])) {
        throw InvalidArgument("CPT of variable " + std::to_string(v) + " disagrees with domain of " +
                              std::to_string(f.scope()[k]));
      }
    }
    // every parent configuration must sum to 1 over the child
    const Factor sums = eliminate(f, static_cast<VarId>(v), ElimOp::sum);
    for (double s : sums.table()) {
      if (std::abs(s - 1.0) > kCptTolerance) {
        throw InvalidArgument("CPT of variable " + std::to_string(v) + " is not normalised (column sum " +
                              std::to_string(s) + ")");
      }
    }
  }

  // Kahn's algorithm, lowest id first
  std::vector<std::size_t> indeg(n);
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    indeg[v] = parents_[v].size();
    if (indeg[v] == 0) ready.push(static_cast<VarId>(v));
  }
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (VarId c : children_[static_cast<std::size_t>(v)]) {
      if (--indeg[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
  }
  if (topo_.size() != n) throw InvalidArgument("parent graph contains a directed cycle");
}

std::size_t BeliefNetwork::max_family_size() const {
  std::size_t m = 0;
  for (const auto& f : cpts_) m = std::max(m, f.arity());
  return m;
}

std::size_t BeliefNetwork::edge_count() const {
  std::size_t e = 0;
  for (const auto& pa : parents_) e += pa.size();
  return e;
}

std::optional<int> Evidence::value(VarId v) const {
  auto it = values_.find(v);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void Evidence::validate(const BeliefNetwork& bn) const {
  for (auto [v, x] : values_) {
    if (v < 0 || static_cast<std::size_t>(v) >= bn.size()) {
      throw InvalidArgument("evidence on unknown variable " + std::to_string(v));
    }
    if (x < 0 || x >= bn.cardinality(v)) {
      throw InvalidArgument("evidence value " + std::to_string(x) + " out of range for variable " +
                            std::to_string(v));
    }
  }
}

bool Evidence::consistent(std::span<const int> x) const {
  return std::all_of(values_.begin(), values_.end(), [&](const auto& kv) {
    return x[static_cast<std::size_t>(kv.first)] == kv.second;
  });
}

void validate_assignment(const BeliefNetwork& bn, std::span<const int> x) {
  if (x.size() != bn.size()) throw InvalidArgument("assignment length differs from variable count");
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] < 0 || x[v] >= bn.cardinality(static_cast<VarId>(v))) {
      throw InvalidArgument("assignment value out of range for variable " + std::to_string(v));
    }
  }
}

double joint_probability(const BeliefNetwork& bn, std::span<const int> x, const Evidence& e) {
  validate_assignment(bn, x);
  if (!e.consistent(x)) return 0.0;
  double p = 1.0;
  for (const Factor& f : bn.cpts()) p *= f.at(x);
  return p;
}

}  // namespace mbe
