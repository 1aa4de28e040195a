#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mbe/factor.hpp"

namespace mbe {

/// One value index per variable.
using Assignment = std::vector<int>;

/// Tolerance on sum_x P(x | parents) = 1.
inline constexpr double kCptTolerance = 1e-9;

/// A discrete belief network: a DAG plus one CPT per variable. CPT scopes are
/// the ascending union of the parents and the child.
class BeliefNetwork {
 public:
  BeliefNetwork() = default;
  /// `cpts[v]` is the CPT of variable v. Validates acyclicity and
  /// normalisation; throws InvalidArgument otherwise.
  BeliefNetwork(Domains domains, std::vector<std::vector<VarId>> parents, std::vector<Factor> cpts);

  std::size_t size() const noexcept { return domains_.size(); }
  const Domains& domains() const noexcept { return domains_; }
  int cardinality(VarId v) const { return domains_.cardinality(v); }
  const std::vector<VarId>& parents(VarId v) const { return parents_.at(static_cast<std::size_t>(v)); }
  const std::vector<VarId>& children(VarId v) const { return children_.at(static_cast<std::size_t>(v)); }
  const Factor& cpt(VarId v) const { return cpts_.at(static_cast<std::size_t>(v)); }
  const std::vector<Factor>& cpts() const noexcept { return cpts_; }
  /// A topological order (parents first), lowest id first among ready nodes.
  const std::vector<VarId>& topological_order() const noexcept { return topo_; }
  /// Largest CPT scope (family size).
  std::size_t max_family_size() const;
  std::size_t edge_count() const;

  bool operator==(const BeliefNetwork& o) const {
    return domains_ == o.domains_ && parents_ == o.parents_ && cpts_ == o.cpts_;
  }

 private:
  Domains domains_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<Factor> cpts_;
  std::vector<VarId> topo_;
};

/// Observed values for a subset of variables.
class Evidence {
 public:
  Evidence() = default;
  Evidence(std::initializer_list<std::pair<const VarId, int>> init) : values_(init) {}

  void set(VarId v, int value) { values_[v] = value; }
  std::optional<int> value(VarId v) const;
  bool observed(VarId v) const { return values_.count(v) != 0; }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::map<VarId, int>& values() const noexcept { return values_; }

  /// Throws InvalidArgument when a variable or value is out of range.
  void validate(const BeliefNetwork& bn) const;
  /// True when `x` agrees with every observation.
  bool consistent(std::span<const int> x) const;

  bool operator==(const Evidence&) const = default;

 private:
  std::map<VarId, int> values_;
};

/// Product of every CPT at `x`; 0 when `x` contradicts `e`.
double joint_probability(const BeliefNetwork& bn, std::span<const int> x, const Evidence& e = {});

/// Throws InvalidArgument unless `x` is a full in-range assignment.
void validate_assignment(const BeliefNetwork& bn, std::span<const int> x);

}  // namespace mbe
