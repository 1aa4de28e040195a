#include "mbe/factor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbe/error.hpp"
#include "mbe/kernels.hpp"

namespace mbe {

Domains::Domains(std::vector<int> cardinalities) : cards_(std::move(cardinalities)) {
  for (std::size_t v = 0; v < cards_.size(); ++v) {
    if (cards_[v] < 2) {
      throw InvalidArgument("variable " + std::to_string(v) + " has cardinality " +
                            std::to_string(cards_[v]) + " (must be >= 2)");
    }
  }
}

const char* to_string(ElimOp op) {
  switch (op) {
    case ElimOp::max: return "max";
    case ElimOp::min: return "min";
    case ElimOp::sum: return "sum";
    case ElimOp::mean: return "mean";
  }
  return "?";
}

Factor::Factor() : table_{1.0} {}

Factor::Factor(Scope scope, std::vector<int> cards, std::vector<double> table)
    : scope_(std::move(scope)), cards_(std::move(cards)), table_(std::move(table)) {
  if (scope_.size() != cards_.size()) {
    throw InvalidArgument("factor scope and cardinality lists differ in length");
  }
  std::size_t cells = 1;
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    if (scope_[k] < 0) throw InvalidArgument("negative variable id in factor scope");
    if (k > 0 && scope_[k] <= scope_[k - 1]) {
      throw InvalidArgument("factor scope must be strictly ascending");
    }
    if (cards_[k] < 1) throw InvalidArgument("factor cardinality must be positive");
    cells *= static_cast<std::size_t>(cards_[k]);
  }
  if (table_.size() != cells) {
    throw InvalidArgument("factor table has " + std::to_string(table_.size()) +
                          " entries, scope requires " + std::to_string(cells));
  }
  for (double x : table_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidArgument("factor entries must be finite and nonnegative");
    }
  }
}

Factor Factor::scalar(double value) { return Factor({}, {}, {value}); }

Factor Factor::over(Scope scope, const Domains& domains, std::vector<double> table) {
  std::vector<int> cards;
  cards.reserve(scope.size());
  for (VarId v : scope) {
    if (v < 0 || static_cast<std::size_t>(v) >= domains.size()) {
      throw InvalidArgument("variable " + std::to_string(v) + " outside the domain list");
    }
    cards.push_back(domains.cardinality(v));
  }
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

bool Factor::contains(VarId v) const { return std::binary_search(scope_.begin(), scope_.end(), v); }

int Factor::local_index(VarId v) const {
  auto it = std::lower_bound(scope_.begin(), scope_.end(), v);
  if (it == scope_.end() || *it != v) return -1;
  return static_cast<int>(it - scope_.begin());
}

int Factor::card_of(VarId v) const {
  int k = local_index(v);
  if (k < 0) throw InvalidArgument("variable " + std::to_string(v) + " not in factor scope");
  return cards_[static_cast<std::size_t>(k)];
}

std::size_t Factor::index_of(std::span<const int> assignment) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    idx = idx * static_cast<std::size_t>(cards_[k]) +
          static_cast<std::size_t>(assignment[static_cast<std::size_t>(scope_[k])]);
  }
  return idx;
}

double Factor::at_local(std::span<const int> values) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    idx = idx * static_cast<std::size_t>(cards_[k]) + static_cast<std::size_t>(values[k]);
  }
  return table_[idx];
}

std::vector<std::size_t> Factor::strides() const {
  std::vector<std::size_t> s(scope_.size());
  std::size_t stride = 1;
  for (std::size_t k = scope_.size(); k-- > 0;) {
    s[k] = stride;
    stride *= static_cast<std::size_t>(cards_[k]);
  }
  return s;
}

std::string Factor::describe() const {
  std::ostringstream os;
  os << "f(";
  for (std::size_t k = 0; k < scope_.size(); ++k) os << (k ? "," : "") << scope_[k];
  os << ")";
  return os.str();
}

Factor multiply(std::span<const Factor> factors, const Domains& domains) {
  if (factors.empty()) throw InvalidArgument("multiply needs at least one factor");
  std::vector<const Factor*> ptrs;
  ptrs.reserve(factors.size());
  for (const Factor& f : factors) {
    for (std::size_t k = 0; k < f.arity(); ++k) {
      VarId v = f.scope()[k];
      if (static_cast<std::size_t>(v) >= domains.size() || domains.cardinality(v) != f.cards()[k]) {
        throw InvalidArgument("domain mismatch for variable " + std::to_string(v));
      }
    }
    ptrs.push_back(&f);
  }
  return kernels::combine_eliminate(ptrs, {}, ElimOp::sum);
}

Factor eliminate(const Factor& f, VarId x, ElimOp op) {
  if (!f.contains(x)) {
    throw InvalidArgument("cannot eliminate variable " + std::to_string(x) + " from " + f.describe());
  }
  const Factor* p = &f;
  return kernels::combine_eliminate(std::span<const Factor* const>(&p, 1),
                                    std::span<const VarId>(&x, 1), op);
}

Factor restrict_to(const Factor& f, VarId x, int value) {
  int k = f.local_index(x);
  if (k < 0) {
    throw InvalidArgument("cannot restrict variable " + std::to_string(x) + " absent from " +
                          f.describe());
  }
  const auto pos = static_cast<std::size_t>(k);
  if (value < 0 || value >= f.cards()[pos]) {
    throw InvalidArgument("value " + std::to_string(value) + " out of range for variable " +
                          std::to_string(x));
  }
  Scope scope = f.scope();
  std::vector<int> cards = f.cards();
  scope.erase(scope.begin() + k);
  cards.erase(cards.begin() + k);

  // outer blocks (vars before x) x inner blocks (vars after x)
  std::size_t inner = 1;
  for (std::size_t j = pos + 1; j < f.arity(); ++j) inner *= static_cast<std::size_t>(f.cards()[j]);
  const auto card = static_cast<std::size_t>(f.cards()[pos]);
  const std::size_t outer = f.size() / (inner * card);
  std::vector<double> table;
  table.reserve(outer * inner);
  auto src = f.table();
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = (o * card + static_cast<std::size_t>(value)) * inner;
    table.insert(table.end(), src.begin() + static_cast<std::ptrdiff_t>(base),
                 src.begin() + static_cast<std::ptrdiff_t>(base + inner));
  }
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

Scope scope_union(std::span<const Factor* const> factors) {
  Scope u;
  for (const Factor* f : factors) {
    Scope merged;
    merged.reserve(u.size() + f->arity());
    std::set_union(u.begin(), u.end(), f->scope().begin(), f->scope().end(),
                   std::back_inserter(merged));
    u = std::move(merged);
  }
  return u;
}

bool is_subset(const Scope& a, const Scope& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace mbe
