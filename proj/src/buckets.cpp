#include "mbe/buckets.hpp"

#include <algorithm>

#include "mbe/error.hpp"

namespace mbe {

BucketPartition partition_buckets(std::span<const Factor> factors, const Ordering& d,
                                  const Evidence& e, std::span<const VarId> cpt_child) {
  if (!cpt_child.empty() && cpt_child.size() != factors.size()) {
    throw InvalidArgument("cpt_child must be empty or one entry per factor");
  }
  BucketPartition out;
  out.buckets.resize(d.size());
  for (std::size_t p = 0; p < d.size(); ++p) {
    out.buckets[p].vars = {d.at(p)};
    out.buckets[p].observed_value = e.value(d.at(p));
  }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Factor& f = factors[k];
    if (f.is_scalar()) {
      out.constant *= f[0];
      continue;
    }
    std::size_t latest = 0;
    for (VarId v : f.scope()) {
      if (v < 0 || static_cast<std::size_t>(v) >= d.size()) {
        throw InvalidArgument("factor variable " + std::to_string(v) + " missing from the ordering");
      }
      latest = std::max(latest, d.position(v));
    }
    out.buckets[latest].factors.push_back(f);
    out.buckets[latest].cpt_child.push_back(cpt_child.empty() ? -1 : cpt_child[k]);
  }
  return out;
}

std::vector<Bucket> super_bucket_grouping(std::vector<Bucket> buckets, const BeliefNetwork& bn,
                                          const Ordering& d) {
  if (buckets.size() != d.size()) {
    throw InvalidArgument("super-bucket grouping expects one bucket per ordering position");
  }
  auto co_parents = [&](const std::vector<VarId>& vars) {
    for (std::size_t c = 0; c < bn.size(); ++c) {
      const auto& pa = bn.parents(static_cast<VarId>(c));
      if (std::all_of(vars.begin(), vars.end(), [&](VarId v) {
            return std::find(pa.begin(), pa.end(), v) != pa.end();
          })) {
        return true;
      }
    }
    return false;
  };

  std::vector<Bucket> grouped;  // built from the processing end, reversed at the end
  std::size_t p = buckets.size();
  while (p > 0) {
    std::size_t lo = p - 1;  // run is [lo, p)
    if (!buckets[lo].observed_value) {
      std::vector<VarId> vars = buckets[lo].vars;
      while (lo > 0 && !buckets[lo - 1].observed_value) {
        std::vector<VarId> wider = vars;
        wider.insert(wider.end(), buckets[lo - 1].vars.begin(), buckets[lo - 1].vars.end());
        if (!co_parents(wider)) break;
        vars = std::move(wider);
        --lo;
      }
    }
    Bucket merged;
    merged.observed_value = buckets[lo].observed_value;
    for (std::size_t q = lo; q < p; ++q) {
      Bucket& b = buckets[q];
      merged.vars.insert(merged.vars.end(), b.vars.begin(), b.vars.end());
      for (std::size_t k = 0; k < b.factors.size(); ++k) {
        merged.factors.push_back(std::move(b.factors[k]));
        merged.cpt_child.push_back(b.cpt_child[k]);
      }
    }
    grouped.push_back(std::move(merged));
    p = lo;
  }
  std::reverse(grouped.begin(), grouped.end());
  return grouped;
}

}  // namespace mbe
