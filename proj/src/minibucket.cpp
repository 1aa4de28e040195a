#include "mbe/minibucket.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "engine.hpp"
#include "mbe/error.hpp"

namespace mbe {

const char* to_string(PartitionStrategy s) {
  return s == PartitionStrategy::by_m ? "by_m" : "by_i";
}

const char* to_string(BoundMode mode) {
  switch (mode) {
    case BoundMode::upper: return "upper";
    case BoundMode::lower: return "lower";
    case BoundMode::mean: return "mean";
  }
  return "?";
}

void MiniBucketConfig::validate() const {
  if (i < 1) throw InfeasibleConfig("i must be at least 1");
  if (m < 1) throw InfeasibleConfig("m must be at least 1");
}

Partitioning canonical_partition(std::span<const Scope> scopes) {
  const std::size_t n = scopes.size();
  std::vector<bool> head(n, true);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n && head[j]; ++k) {
      if (k == j || !is_subset(scopes[j], scopes[k])) continue;
      if (scopes[j].size() < scopes[k].size() || k < j) head[j] = false;
    }
  }
  Partitioning q;
  std::vector<std::size_t> block_of(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!head[j]) continue;
    block_of[j] = q.size();
    q.push_back({j});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (head[j]) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (head[k] && is_subset(scopes[j], scopes[k])) {
        q[block_of[k]].push_back(j);
        break;
      }
    }
  }
  for (auto& block : q) std::sort(block.begin(), block.end());
  return q;
}

namespace {

struct Group {
  std::vector<std::size_t> members;
  Scope vars;  // union scope minus bucket variables, ascending
  std::size_t heads = 0;
};

Scope block_vars(const std::vector<std::size_t>& block, std::span<const Scope> scopes,
                 std::span<const VarId> bucket_vars) {
  Scope out;
  for (std::size_t j : block) {
    for (VarId v : scopes[j]) {
      if (std::find(bucket_vars.begin(), bucket_vars.end(), v) == bucket_vars.end()) {
        out.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Scope merged(const Scope& a, const Scope& b) {
  Scope out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Partitioning im_partition(const Partitioning& canonical, const MiniBucketConfig& cfg,
                          std::span<const Scope> scopes, std::span<const VarId> bucket_vars) {
  cfg.validate();
  std::vector<Group> groups;
  for (const auto& block : canonical) {
    Group g{block, block_vars(block, scopes, bucket_vars), 1};
    if (g.vars.size() > cfg.i && cfg.strict) {
      throw InfeasibleConfig("i = " + std::to_string(cfg.i) + " is below a function scope of " +
                             std::to_string(g.vars.size()) + " variables in this bucket");
    }
    auto fits = [&](const Group& into) {
      return into.heads + g.heads <= cfg.m && merged(into.vars, g.vars).size() <= cfg.i;
    };
    Group* target = nullptr;
    if (cfg.strategy == PartitionStrategy::by_i) {
      for (Group& cand : groups) {
        if (fits(cand)) {
          target = &cand;
          break;
        }
      }
    } else if (!groups.empty() && fits(groups.back())) {
      target = &groups.back();
    }
    if (target) {
      target->members.insert(target->members.end(), g.members.begin(), g.members.end());
      target->vars = merged(target->vars, g.vars);
      target->heads += g.heads;
    } else {
      groups.push_back(std::move(g));
    }
  }
  Partitioning q;
  for (Group& g : groups) {
    std::sort(g.members.begin(), g.members.end());
    q.push_back(std::move(g.members));
  }
  return q;
}

bool is_refinement(const Partitioning& qa, const Partitioning& qb) {
  auto ground = [](const Partitioning& q) {
    std::vector<std::size_t> all;
    for (const auto& b : q) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    return all;
  };
  if (ground(qa) != ground(qb)) throw InvalidArgument("partitionings cover different factors");
  for (const auto& a : qa) {
    bool inside = std::any_of(qb.begin(), qb.end(), [&](const auto& b) {
      return std::all_of(a.begin(), a.end(), [&](std::size_t j) {
        return std::find(b.begin(), b.end(), j) != b.end();
      });
    });
    if (!inside) return false;
  }
  return true;
}

namespace {

Factor process_block(std::span<const Factor* const> factors, const std::vector<std::size_t>& block,
                     std::span<const VarId> vars, ElimOp op, const ElimOptions& opts) {
  std::vector<const Factor*> ptrs;
  for (std::size_t j : block) ptrs.push_back(factors[j]);
  return kernels::combine_eliminate(ptrs, vars, op, opts.kernel, opts.max_cells);
}

}  // namespace

std::vector<Factor> process_bucket_max(std::span<const Factor* const> factors,
                                       std::span<const VarId> vars, const Partitioning& q,
                                       const ElimOptions& opts) {
  std::vector<Factor> out;
  for (const auto& block : q) out.push_back(process_block(factors, block, vars, ElimOp::max, opts));
  return out;
}

std::vector<Factor> process_bucket_sum_guarded(std::span<const Factor* const> factors,
                                               std::span<const VarId> vars, const Partitioning& q,
                                               BoundMode mode, const ElimOptions& opts) {
  const ElimOp rest = mode == BoundMode::upper   ? ElimOp::max
                      : mode == BoundMode::lower ? ElimOp::min
                                                 : ElimOp::mean;
  std::vector<Factor> out;
  for (std::size_t l = 0; l < q.size(); ++l) {
    out.push_back(process_block(factors, q[l], vars, l == 0 ? ElimOp::sum : rest, opts));
  }
  return out;
}

Partitioning bucket_partition(std::span<const Factor* const> factors, std::span<const VarId> vars,
                              const MiniBucketConfig& cfg, std::optional<std::size_t> own_cpt) {
  std::vector<Scope> scopes;
  for (const Factor* f : factors) scopes.push_back(f->scope());
  Partitioning q = im_partition(canonical_partition(scopes), cfg, scopes, vars);
  if (own_cpt) {
    auto it = std::find_if(q.begin(), q.end(), [&](const auto& b) {
      return std::find(b.begin(), b.end(), *own_cpt) != b.end();
    });
    if (it != q.end()) std::rotate(q.begin(), it, it + 1);
  }
  return q;
}

namespace {

std::vector<const Factor*> pointers(const std::vector<detail::BucketItem>& items) {
  std::vector<const Factor*> out;
  for (const auto& it : items) out.push_back(it.factor);
  return out;
}

std::optional<std::size_t> own_cpt(const detail::BucketView& view) {
  for (std::size_t k = 0; k < view.items.size(); ++k) {
    const VarId c = view.items[k].cpt_child;
    if (c >= 0 && std::find(view.bucket.vars.begin(), view.bucket.vars.end(), c) !=
                      view.bucket.vars.end()) {
      return k;
    }
  }
  return std::nullopt;
}

detail::ProcessResult max_bucket(const detail::BucketView& view, const MiniBucketConfig& cfg,
                                 const ElimOptions& opts) {
  auto ptrs = pointers(view.items);
  Partitioning q = bucket_partition(ptrs, view.bucket.vars, cfg);
  return {process_bucket_max(ptrs, view.bucket.vars, q, opts), q.size()};
}

detail::ProcessResult sum_bucket(const detail::BucketView& view, const MiniBucketConfig& cfg,
                                 BoundMode mode, const ElimOptions& opts) {
  auto ptrs = pointers(view.items);
  Partitioning q = bucket_partition(ptrs, view.bucket.vars, cfg, own_cpt(view));
  return {process_bucket_sum_guarded(ptrs, view.bucket.vars, q, mode, opts), q.size()};
}

Diagnostics diagnostics(const EliminationTrace& t, std::chrono::steady_clock::time_point start) {
  Diagnostics d;
  d.mb = t.max_mini_buckets;
  d.fi = t.max_family;
  d.fo = t.max_arity;
  d.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

}  // namespace

BoundsResult approx_mpe(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                        const MiniBucketConfig& cfg, const ElimOptions& opts,
                        EliminationTrace* trace) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  detail::Engine engine(bn, e, d, opts.super_buckets);
  engine.backward(0, [&](const detail::BucketView& v) { return max_bucket(v, cfg, opts); });
  BoundsResult out;
  out.upper = engine.constant();
  out.tuple = engine.forward(engine.bucket_count());
  out.lower = joint_probability(bn, out.tuple, e);
  EliminationTrace t = engine.finish();
  out.diag = diagnostics(t, start);
  if (trace) *trace = std::move(t);
  return out;
}

BelBound approx_bel(const BeliefNetwork& bn, const Evidence& e, const Ordering& d, VarId query,
                    const MiniBucketConfig& cfg, BoundMode mode, const ElimOptions& opts,
                    EliminationTrace* trace) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  if (d.size() == 0 || d.at(0) != query) {
    throw InvalidArgument("belief updating needs the query variable first in the ordering");
  }
  detail::Engine engine(bn, e, d, false);
  engine.backward(1, [&](const detail::BucketView& v) { return sum_bucket(v, cfg, mode, opts); });

  auto ptrs = pointers(engine.items(0));
  std::vector<double> table(static_cast<std::size_t>(bn.cardinality(query)), 1.0);
  if (!ptrs.empty()) {
    Factor f = kernels::combine_eliminate(ptrs, {}, ElimOp::sum, opts.kernel, opts.max_cells);
    table.assign(f.table().begin(), f.table().end());
  }
  const auto observed = e.value(query);
  for (std::size_t k = 0; k < table.size(); ++k) {
    table[k] *= engine.constant();
    if (observed && static_cast<int>(k) != *observed) table[k] = 0.0;
  }

  BelBound out;
  out.mode = mode;
  out.bound = Factor::over({query}, bn.domains(), std::move(table));
  for (double v : out.bound.table()) out.p_evidence_bound += v;
  EliminationTrace t = engine.finish();
  out.diag = diagnostics(t, start);
  if (trace) *trace = std::move(t);
  return out;
}

BoundsResult approx_map(const BeliefNetwork& bn, const Evidence& e, const Ordering& d,
                        const std::vector<VarId>& hyp, const MiniBucketConfig& cfg,
                        const ElimOptions& opts, EliminationTrace* trace) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  const std::size_t k = hyp.size();
  if (k > d.size()) throw InvalidArgument("more hypothesis variables than network variables");
  for (VarId h : hyp) {
    if (h < 0 || static_cast<std::size_t>(h) >= d.size() || d.position(h) >= k) {
      throw InvalidArgument("hypothesis variables must occupy the first positions of the ordering");
    }
  }
  detail::Engine engine(bn, e, d, false);
  engine.backward(0, [&](const detail::BucketView& v) {
    return v.index < k ? max_bucket(v, cfg, opts) : sum_bucket(v, cfg, BoundMode::upper, opts);
  });
  BoundsResult out;
  out.upper = engine.constant();
  out.tuple = engine.forward(k);
  EliminationTrace t = engine.finish();

  Evidence with_hyp = e;
  for (VarId h : hyp) with_hyp.set(h, out.tuple[static_cast<std::size_t>(h)]);
  try {
    out.lower = probability_of_evidence(bn, with_hyp, d, opts);
  } catch (const ResourceError&) {
    out.has_lower = false;
    out.lower = 0.0;
  }
  out.diag = diagnostics(t, start);
  if (trace) *trace = std::move(t);
  return out;
}

Ratios bound_ratios(std::optional<double> exact, double upper, double lower) {
  auto ratio = [](double a, double b) {
    if (b > 0.0) return a / b;
    return a > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {exact ? ratio(*exact, lower) : nan, exact ? ratio(upper, *exact) : nan,
          ratio(upper, lower)};
}

}  // namespace mbe
