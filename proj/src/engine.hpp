#pragma once

// Bucket-processing skeleton shared by the exact and mini-bucket engines.
// The engine owns bucket contents, routing, evidence restriction, the
// forward pass and diagnostics; callers supply what happens inside a
// non-observed bucket.

#include <chrono>
#include <deque>
#include <functional>
#include <vector>

#include "mbe/elimination.hpp"

namespace mbe::detail {

struct BucketItem {
  const Factor* factor;
  VarId cpt_child;  // -1 unless an original CPT
};

struct BucketView {
  std::size_t index;
  const Bucket& bucket;
  std::vector<BucketItem> items;  // originals first, then received in arrival order
};

struct ProcessResult {
  std::vector<Factor> outputs;
  std::size_t mini_buckets = 1;
};

using BucketProcessor = std::function<ProcessResult(const BucketView&)>;

class Engine {
 public:
  Engine(const BeliefNetwork& bn, const Evidence& e, const Ordering& d, bool super_buckets);

  std::size_t bucket_count() const noexcept { return trace_.buckets.size(); }
  const Bucket& bucket(std::size_t b) const { return trace_.buckets[b]; }
  std::size_t bucket_of(VarId v) const { return bucket_of_[static_cast<std::size_t>(v)]; }

  /// Processes buckets from the last down to `stop` inclusive.
  void backward(std::size_t stop, const BucketProcessor& process);

  /// Assigns buckets [0, upto) in d order, maximising the product of each
  /// bucket's contents; ties go to the lexicographically smallest values.
  /// Observed variables take their evidence value.
  Assignment forward(std::size_t upto) const;

  std::vector<BucketItem> items(std::size_t b) const;
  double constant() const noexcept { return constant_; }

  /// Finalises diagnostics and hands over the trace.
  EliminationTrace finish();

 private:
  void route(std::size_t source, Factor f, bool restricted);

  const BeliefNetwork& bn_;
  const Evidence& e_;
  EliminationTrace trace_;
  std::vector<std::size_t> bucket_of_;
  std::deque<RecordedFunction> recorded_;           // stable addresses
  std::vector<std::vector<std::size_t>> received_;  // per bucket, indices into recorded_
  double constant_ = 1.0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace mbe::detail
