#pragma once

#include <cstddef>
#include <vector>

#include "mbe/network.hpp"

namespace mbe {

/// Brute-force enumeration, for checking the elimination engines on small
/// networks.
struct OracleBudget {
  std::size_t max_states = std::size_t{1} << 20;
};

struct OracleMpe {
  double value = 0.0;
  Assignment assignment;  // lexicographically smallest optimum
};

struct OracleBel {
  std::vector<double> joint;  // P(query = x, e)
  double p_evidence = 0.0;
};

struct OracleMap {
  double value = 0.0;
  std::vector<VarId> hyp;       // ascending
  std::vector<int> hyp_values;  // lexicographically smallest optimum
};

/// Number of full assignments; saturates at SIZE_MAX.
std::size_t state_space(const BeliefNetwork& bn);

/// All three throw ResourceError when the state space exceeds the budget.
OracleMpe brute_mpe(const BeliefNetwork& bn, const Evidence& e, OracleBudget budget = {});
OracleBel brute_bel(const BeliefNetwork& bn, const Evidence& e, VarId query,
                    OracleBudget budget = {});
OracleMap brute_map(const BeliefNetwork& bn, const Evidence& e, std::vector<VarId> hyp,
                    OracleBudget budget = {});

}  // namespace mbe
