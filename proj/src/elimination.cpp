#include "mbe/elimination.hpp"

#include <algorithm>

#include "engine.hpp"
#include "mbe/error.hpp"

namespace mbe {

std::vector<const Factor*> EliminationTrace::contents(std::size_t b) const {
  std::vector<const Factor*> out;
  for (const Factor& f : buckets.at(b).factors) out.push_back(&f);
  for (const RecordedFunction& r : recorded) {
    if (r.target == b) out.push_back(&r.function);
  }
  return out;
}

std::vector<const RecordedFunction*> EliminationTrace::generated() const {
  std::vector<const RecordedFunction*> out;
  for (const RecordedFunction& r : recorded) {
    if (!r.restricted) out.push_back(&r);
  }
  return out;
}

std::vector<double> BelResult::posterior() const {
  if (p_evidence <= 0.0) return {};
  std::vector<double> out(joint.table().begin(), joint.table().end());
  for (double& v : out) v /= p_evidence;
  return out;
}

namespace {

std::vector<const Factor*> pointers(const std::vector<detail::BucketItem>& items) {
  std::vector<const Factor*> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.factor);
  return out;
}

detail::BucketProcessor full_bucket(ElimOp op, const ElimOptions& opts) {
  return [op, opts](const detail::BucketView& view) {
    detail::ProcessResult r;
    auto ptrs = pointers(view.items);
    r.outputs.push_back(
        kernels::combine_eliminate(ptrs, view.bucket.vars, op, opts.kernel, opts.max_cells));
    return r;
  };
}

}  // namespace

MpeResult elim_mpe(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                   const ElimOptions& opts) {
  detail::Engine engine(bn, e, d, opts.super_buckets);
  engine.backward(0, full_bucket(ElimOp::max, opts));
  MpeResult out;
  out.value = engine.constant();
  out.evidence_impossible = out.value <= 0.0;
  out.assignment = engine.forward(engine.bucket_count());
  out.trace = engine.finish();
  return out;
}

BelResult elim_bel(const BeliefNetwork& bn, const Evidence& e, const Ordering& d, VarId query,
                   const ElimOptions& opts) {
  if (d.size() == 0 || d.at(0) != query) {
    throw InvalidArgument("belief updating needs the query variable first in the ordering");
  }
  detail::Engine engine(bn, e, d, false);
  engine.backward(1, full_bucket(ElimOp::sum, opts));

  auto items = engine.items(0);
  Factor joint;
  if (items.empty()) {
    joint = Factor::over({query}, bn.domains(),
                         std::vector<double>(static_cast<std::size_t>(bn.cardinality(query)), 1.0));
  } else {
    auto ptrs = pointers(items);
    joint = kernels::combine_eliminate(ptrs, {}, ElimOp::sum, opts.kernel, opts.max_cells);
  }
  std::vector<double> table(joint.table().begin(), joint.table().end());
  const auto observed = e.value(query);
  for (std::size_t k = 0; k < table.size(); ++k) {
    table[k] *= engine.constant();
    if (observed && static_cast<int>(k) != *observed) table[k] = 0.0;
  }

  BelResult out;
  out.joint = Factor::over({query}, bn.domains(), std::move(table));
  for (double v : out.joint.table()) out.p_evidence += v;
  out.evidence_impossible = out.p_evidence <= 0.0;
  out.trace = engine.finish();
  return out;
}

MapResult elim_map(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                   std::vector<VarId> hyp, const ElimOptions& opts) {
  const std::size_t k = hyp.size();
  if (k > d.size()) throw InvalidArgument("more hypothesis variables than network variables");
  for (VarId h : hyp) {
    if (h < 0 || static_cast<std::size_t>(h) >= d.size() || d.position(h) >= k) {
      throw InvalidArgument("hypothesis variables must occupy the first positions of the ordering");
    }
  }
  detail::Engine engine(bn, e, d, false);
  auto sum = full_bucket(ElimOp::sum, opts);
  auto max = full_bucket(ElimOp::max, opts);
  engine.backward(0, [&](const detail::BucketView& view) {
    return view.index < k ? max(view) : sum(view);
  });

  MapResult out;
  out.value = engine.constant();
  const Assignment x = engine.forward(k);
  std::sort(hyp.begin(), hyp.end());
  out.hyp = hyp;
  for (VarId h : hyp) out.hyp_values.push_back(x[static_cast<std::size_t>(h)]);
  out.trace = engine.finish();
  out.p_evidence = k == 0 ? out.value : probability_of_evidence(bn, e, d, opts);
  out.evidence_impossible = out.p_evidence <= 0.0;
  return out;
}

double probability_of_evidence(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                               const ElimOptions& opts) {
  detail::Engine engine(bn, e, d, false);
  engine.backward(0, full_bucket(ElimOp::sum, opts));
  return engine.constant();
}

Ordering move_to_front(const Ordering& base, const std::vector<VarId>& first) {
  std::vector<bool> taken(base.size(), false);
  std::vector<VarId> order;
  order.reserve(base.size());
  for (VarId v : first) {
    if (v < 0 || static_cast<std::size_t>(v) >= base.size() || taken[static_cast<std::size_t>(v)]) {
      throw InvalidArgument("move_to_front: bad or repeated variable " + std::to_string(v));
    }
    taken[static_cast<std::size_t>(v)] = true;
    order.push_back(v);
  }
  for (VarId v : base.order()) {
    if (!taken[static_cast<std::size_t>(v)]) order.push_back(v);
  }
  return Ordering(std::move(order));
}

}  // namespace mbe
