#include "engine.hpp"

#include <algorithm>

#include "mbe/error.hpp"

namespace mbe::detail {

Engine::Engine(const BeliefNetwork& bn, const Evidence& e, const Ordering& d, bool super_buckets)
    : bn_(bn), e_(e), start_(std::chrono::steady_clock::now()) {
  if (d.size() != bn.size()) throw InvalidArgument("ordering size differs from network size");
  e.validate(bn);
  std::vector<VarId> child(bn.size());
  for (std::size_t v = 0; v < bn.size(); ++v) child[v] = static_cast<VarId>(v);
  BucketPartition part = partition_buckets(bn.cpts(), d, e, child);
  constant_ = part.constant;
  trace_.buckets = super_buckets ? super_bucket_grouping(std::move(part.buckets), bn, d)
                                 : std::move(part.buckets);
  trace_.max_family = bn.max_family_size();
  bucket_of_.assign(bn.size(), 0);
  for (std::size_t b = 0; b < trace_.buckets.size(); ++b) {
    for (VarId v : trace_.buckets[b].vars) bucket_of_[static_cast<std::size_t>(v)] = b;
  }
  received_.assign(trace_.buckets.size(), {});
}

std::vector<BucketItem> Engine::items(std::size_t b) const {
  std::vector<BucketItem> out;
  const Bucket& bucket = trace_.buckets[b];
  for (std::size_t k = 0; k < bucket.factors.size(); ++k) {
    out.push_back({&bucket.factors[k], bucket.cpt_child[k]});
  }
  for (std::size_t r : received_[b]) out.push_back({&recorded_[r].function, -1});
  return out;
}

void Engine::route(std::size_t source, Factor f, bool restricted) {
  RecordedFunction rec;
  rec.source = source;
  rec.restricted = restricted;
  if (f.is_scalar()) {
    constant_ *= f[0];
  } else {
    std::size_t target = 0;
    for (VarId v : f.scope()) target = std::max(target, bucket_of(v));
    if (target >= source) {
      throw InvalidArgument("bucket output still mentions a variable of its own or a later bucket");
    }
    rec.target = target;
  }
  trace_.max_arity = std::max(trace_.max_arity, f.arity());
  rec.function = std::move(f);
  recorded_.push_back(std::move(rec));
  if (recorded_.back().target) received_[*recorded_.back().target].push_back(recorded_.size() - 1);
}

void Engine::backward(std::size_t stop, const BucketProcessor& process) {
  for (std::size_t b = trace_.buckets.size(); b-- > stop;) {
    const Bucket& bucket = trace_.buckets[b];
    auto contents = items(b);
    if (bucket.observed_value) {
      const VarId x = bucket.vars.front();
      for (const BucketItem& it : contents) {
        route(b, it.factor->contains(x) ? restrict_to(*it.factor, x, *bucket.observed_value)
                                        : *it.factor,
              true);
      }
      continue;
    }
    if (contents.empty()) continue;
    ProcessResult r = process(BucketView{b, bucket, std::move(contents)});
    trace_.max_mini_buckets = std::max(trace_.max_mini_buckets, r.mini_buckets);
    for (Factor& f : r.outputs) route(b, std::move(f), false);
  }
}

Assignment Engine::forward(std::size_t upto) const {
  Assignment x(bn_.size(), 0);
  for (auto [v, value] : e_.values()) x[static_cast<std::size_t>(v)] = value;
  for (std::size_t b = 0; b < upto; ++b) {
    const Bucket& bucket = trace_.buckets[b];
    if (bucket.observed_value) continue;
    const auto contents = items(b);
    const auto& vars = bucket.vars;
    std::vector<int> best(vars.size(), 0), cur(vars.size(), 0);
    double best_val = -1.0;
    for (;;) {
      for (std::size_t j = 0; j < vars.size(); ++j) x[static_cast<std::size_t>(vars[j])] = cur[j];
      double val = 1.0;
      for (const BucketItem& it : contents) val *= it.factor->at(x);
      if (val > best_val) {
        best_val = val;
        best = cur;
      }
      std::size_t j = vars.size();
      while (j-- > 0) {
        if (++cur[j] < bn_.cardinality(vars[j])) break;
        cur[j] = 0;
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
    for (std::size_t j = 0; j < vars.size(); ++j) x[static_cast<std::size_t>(vars[j])] = best[j];
  }
  return x;
}

EliminationTrace Engine::finish() {
  trace_.recorded.assign(recorded_.begin(), recorded_.end());
  trace_.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return std::move(trace_);
}

}  // namespace mbe::detail
