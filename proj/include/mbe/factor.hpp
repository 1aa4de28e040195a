#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mbe {

using VarId = int;
using Scope = std::vector<VarId>;

/// Default cap on cells of any single recorded table (2^26).
inline constexpr std::size_t kDefaultMaxCells = std::size_t{1} << 26;

/// Cardinality of every variable of one network.
class Domains {
 public:
  Domains() = default;
  explicit Domains(std::vector<int> cardinalities);

  std::size_t size() const noexcept { return cards_.size(); }
  int cardinality(VarId v) const { return cards_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& cardinalities() const noexcept { return cards_; }

  bool operator==(const Domains&) const = default;

 private:
  std::vector<int> cards_;
};

enum class ElimOp { max, min, sum, mean };

const char* to_string(ElimOp op);

/// Nonnegative table over an ascending scope; the last scope variable varies
/// fastest. An empty scope holds a single scalar.
class Factor {
 public:
  /// The scalar 1.
  Factor();
  Factor(Scope scope, std::vector<int> cards, std::vector<double> table);

  static Factor scalar(double value);
  /// Builds the scope's cardinalities from `domains`.
  static Factor over(Scope scope, const Domains& domains, std::vector<double> table);

  const Scope& scope() const noexcept { return scope_; }
  const std::vector<int>& cards() const noexcept { return cards_; }
  std::span<const double> table() const noexcept { return table_; }
  std::size_t size() const noexcept { return table_.size(); }
  std::size_t arity() const noexcept { return scope_.size(); }
  bool is_scalar() const noexcept { return scope_.empty(); }
  double operator[](std::size_t i) const { return table_[i]; }

  bool contains(VarId v) const;
  /// Position of `v` in the scope, or -1.
  int local_index(VarId v) const;
  /// Cardinality of a scope variable.
  int card_of(VarId v) const;

  /// Table index of a full assignment (indexed by VarId).
  std::size_t index_of(std::span<const int> assignment) const;
  /// Value at a full assignment (indexed by VarId); variables outside the
  /// scope are ignored.
  double at(std::span<const int> assignment) const { return table_[index_of(assignment)]; }
  /// Value at an assignment given only for the scope, in scope order.
  double at_local(std::span<const int> values) const;

  /// Row-major strides, last scope variable has stride 1.
  std::vector<std::size_t> strides() const;

  bool operator==(const Factor&) const = default;

  std::string describe() const;

 private:
  Scope scope_;
  std::vector<int> cards_;
  std::vector<double> table_;
};

/// Product of a nonempty sequence of factors; result scope is the ascending
/// union. Throws InvalidArgument when a factor disagrees with `domains`.
Factor multiply(std::span<const Factor> factors, const Domains& domains);

/// Eliminates `x` from `f` with the given operator. Throws when x is absent.
Factor eliminate(const Factor& f, VarId x, ElimOp op);

/// Slice of `f` at x = value.
Factor restrict_to(const Factor& f, VarId x, int value);

/// Ascending union of the scopes.
Scope scope_union(std::span<const Factor* const> factors);

bool is_subset(const Scope& a, const Scope& b);

}  // namespace mbe
