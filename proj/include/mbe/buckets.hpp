#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mbe/factor.hpp"
#include "mbe/graph.hpp"
#include "mbe/network.hpp"

namespace mbe {

/// Functions whose latest-in-d scope variable belongs to `vars`.
struct Bucket {
  std::vector<VarId> vars;  // one variable, or a super-bucket's variables in d order
  std::vector<Factor> factors;
  std::vector<VarId> cpt_child;  // per factor: the CPT's child, or -1
  std::optional<int> observed_value;

  bool is_super() const noexcept { return vars.size() > 1; }
};

struct BucketPartition {
  std::vector<Bucket> buckets;  // one per position of d
  double constant = 1.0;        // product of scope-less inputs
};

/// Places each factor in the bucket of its latest-in-d variable and attaches
/// evidence values. `cpt_child` is optional per-factor metadata.
BucketPartition partition_buckets(std::span<const Factor> factors, const Ordering& d,
                                  const Evidence& e, std::span<const VarId> cpt_child = {});

/// Merges maximal runs of consecutive unobserved buckets whose variables are
/// all parents of one variable. Runs are grown from the processing end of d.
/// Observed buckets are never merged.
std::vector<Bucket> super_bucket_grouping(std::vector<Bucket> buckets, const BeliefNetwork& bn,
                                          const Ordering& d);

}  // namespace mbe
