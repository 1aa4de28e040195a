#include "mbe/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "mbe/error.hpp"

namespace mbe {

std::size_t state_space(const BeliefNetwork& bn) {
  std::size_t s = 1;
  for (int c : bn.domains().cardinalities()) {
    if (s > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(c)) {
      return std::numeric_limits<std::size_t>::max();
    }
    s *= static_cast<std::size_t>(c);
  }
  return s;
}

namespace {

/// Calls visit(x, p) for every assignment in lexicographic order, p = P(x, e).
template <class Visit>
void enumerate(const BeliefNetwork& bn, const Evidence& e, OracleBudget budget, Visit visit) {
  e.validate(bn);
  const std::size_t states = state_space(bn);
  if (states > budget.max_states) {
    throw ResourceError("oracle state space " + std::to_string(states) + " exceeds the budget",
                        states);
  }
  Assignment x(bn.size(), 0);
  for (;;) {
    visit(x, joint_probability(bn, x, e));
    std::size_t j = x.size();
    while (j-- > 0) {
      if (++x[j] < bn.cardinality(static_cast<VarId>(j))) break;
      x[j] = 0;
    }
    if (j == std::numeric_limits<std::size_t>::max()) return;
  }
}

}  // namespace

OracleMpe brute_mpe(const BeliefNetwork& bn, const Evidence& e, OracleBudget budget) {
  OracleMpe out;
  bool first = true;
  enumerate(bn, e, budget, [&](const Assignment& x, double p) {
    if (first || p > out.value) {
      out.value = p;
      out.assignment = x;
      first = false;
    }
  });
  return out;
}

OracleBel brute_bel(const BeliefNetwork& bn, const Evidence& e, VarId query, OracleBudget budget) {
  if (query < 0 || static_cast<std::size_t>(query) >= bn.size()) {
    throw InvalidArgument("query variable out of range");
  }
  OracleBel out;
  out.joint.assign(static_cast<std::size_t>(bn.cardinality(query)), 0.0);
  enumerate(bn, e, budget, [&](const Assignment& x, double p) {
    out.joint[static_cast<std::size_t>(x[static_cast<std::size_t>(query)])] += p;
  });
  for (double v : out.joint) out.p_evidence += v;
  return out;
}

OracleMap brute_map(const BeliefNetwork& bn, const Evidence& e, std::vector<VarId> hyp,
                    OracleBudget budget) {
  std::sort(hyp.begin(), hyp.end());
  if (std::adjacent_find(hyp.begin(), hyp.end()) != hyp.end()) {
    throw InvalidArgument("repeated hypothesis variable");
  }
  for (VarId h : hyp) {
    if (h < 0 || static_cast<std::size_t>(h) >= bn.size()) {
      throw InvalidArgument("hypothesis variable out of range");
    }
  }
  std::map<std::vector<int>, double> score;  // ordered, so ties resolve lexicographically
  enumerate(bn, e, budget, [&](const Assignment& x, double p) {
    std::vector<int> key;
    for (VarId h : hyp) key.push_back(x[static_cast<std::size_t>(h)]);
    score[key] += p;
  });
  OracleMap out;
  out.hyp = hyp;
  bool first = true;
  for (const auto& [key, p] : score) {
    if (first || p > out.value) {
      out.value = p;
      out.hyp_values = key;
      first = false;
    }
  }
  return out;
}

}  // namespace mbe
