#include "mbe/generators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "mbe/error.hpp"

namespace mbe {

const char* to_string(NetworkKind kind) {
  return kind == NetworkKind::uniform ? "uniform" : "noisy_or";
}

const char* to_string(EvidencePolicy p) {
  return p == EvidencePolicy::positive_ones ? "positive_ones" : "sampled";
}

void GenSpec::validate() const {
  if (n == 0) throw InvalidArgument("a network needs at least one node");
  if (e > n * (n - 1) / 2) {
    throw InvalidArgument(std::to_string(e) + " edges do not fit in a DAG on " +
                          std::to_string(n) + " nodes");
  }
  if (cardinality < 2) throw InvalidArgument("cardinality must be at least 2");
  if (kind == NetworkKind::noisy_or && cardinality != 2) {
    throw InvalidArgument("noisy-OR networks are binary");
  }
}

double Rng::uniform() {
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below needs a positive bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do r = eng_(); while (r >= limit);
  return r % bound;
}

Dag gen_graph(const GenSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = spec.n;
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  rng.shuffle(rank);

  auto orient = [&](VarId a, VarId b) {
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]
               ? std::pair{a, b}
               : std::pair{b, a};
  };
  std::set<std::pair<VarId, VarId>> edges;
  const std::size_t capacity = n * (n - 1) / 2;
  if (2 * spec.e <= capacity) {
    while (edges.size() < spec.e) {
      const auto a = static_cast<VarId>(rng.below(n));
      const auto b = static_cast<VarId>(rng.below(n));
      if (a != b) edges.insert(orient(a, b));
    }
  } else {
    std::vector<std::pair<VarId, VarId>> all;
    for (VarId a = 0; a < static_cast<VarId>(n); ++a) {
      for (VarId b = a + 1; b < static_cast<VarId>(n); ++b) all.push_back(orient(a, b));
    }
    rng.shuffle(all);
    edges.insert(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(spec.e));
  }

  Dag dag(n);
  for (auto [from, to] : edges) dag[static_cast<std::size_t>(to)].push_back(from);
  for (auto& pa : dag) std::sort(pa.begin(), pa.end());
  return dag;
}

namespace {

std::vector<double> normalized(std::vector<double> col) {
  double s = 0.0;
  for (double v : col) s += v;
  for (double& v : col) v /= s;
  return col;
}

/// CPT over parents + child; cols[c][x] = P(child = x | parent config c),
/// parent configs row-major over ascending parents.
Factor cpt_from_columns(VarId child, const std::vector<VarId>& parents, const Domains& dom,
                        const std::vector<std::vector<double>>& cols) {
  Scope scope = parents;
  scope.push_back(child);
  std::sort(scope.begin(), scope.end());
  std::size_t cells = 1;
  for (VarId v : scope) cells *= static_cast<std::size_t>(dom.cardinality(v));
  std::vector<double> table(cells);
  std::vector<int> vals(scope.size(), 0);
  for (std::size_t idx = 0; idx < cells; ++idx) {
    std::size_t config = 0;
    int x = 0;
    for (std::size_t j = 0; j < scope.size(); ++j) {
      if (scope[j] == child) {
        x = vals[j];
      } else {
        config = config * static_cast<std::size_t>(dom.cardinality(scope[j])) +
                 static_cast<std::size_t>(vals[j]);
      }
    }
    table[idx] = cols[config][static_cast<std::size_t>(x)];
    for (std::size_t j = scope.size(); j-- > 0;) {
      if (++vals[j] < dom.cardinality(scope[j])) break;
      vals[j] = 0;
    }
  }
  return Factor::over(std::move(scope), dom, std::move(table));
}

std::size_t config_count(const std::vector<VarId>& parents, const Domains& dom) {
  std::size_t c = 1;
  for (VarId p : parents) c *= static_cast<std::size_t>(dom.cardinality(p));
  return c;
}

}  // namespace

BeliefNetwork gen_uniform_cpts(const Dag& dag, const GenSpec& spec, Rng& rng) {
  Domains dom(std::vector<int>(dag.size(), spec.cardinality));
  std::vector<Factor> cpts;
  for (std::size_t v = 0; v < dag.size(); ++v) {
    std::vector<std::vector<double>> cols(config_count(dag[v], dom));
    for (auto& col : cols) {
      col.resize(static_cast<std::size_t>(spec.cardinality));
      for (double& p : col) p = rng.uniform();
      col = normalized(std::move(col));
    }
    cpts.push_back(cpt_from_columns(static_cast<VarId>(v), dag[v], dom, cols));
  }
  return BeliefNetwork(dom, dag, std::move(cpts));
}

BeliefNetwork gen_noisy_or_cpts(const Dag& dag, const GenSpec& spec, Rng& rng) {
  if (spec.cardinality != 2) throw InvalidArgument("noisy-OR networks are binary");
  Domains dom(std::vector<int>(dag.size(), 2));
  std::vector<Factor> cpts;
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const auto& pa = dag[v];
    std::vector<std::vector<double>> cols(config_count(pa, dom));
    if (pa.empty()) {
      cols[0] = normalized({rng.uniform(), rng.uniform()});
    } else {
      std::vector<double> q(pa.size());
      for (double& qk : q) qk = rng.uniform();
      for (std::size_t c = 0; c < cols.size(); ++c) {
        double off = 1.0;
        for (std::size_t k = 0; k < pa.size(); ++k) {
          if ((c >> (pa.size() - 1 - k)) & 1U) off *= q[k];
        }
        cols[c] = {off, 1.0 - off};
      }
    }
    cpts.push_back(cpt_from_columns(static_cast<VarId>(v), pa, dom, cols));
  }
  return BeliefNetwork(dom, dag, std::move(cpts));
}

BeliefNetwork generate(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Dag dag = gen_graph(spec, rng);
  return spec.kind == NetworkKind::uniform ? gen_uniform_cpts(dag, spec, rng)
                                           : gen_noisy_or_cpts(dag, spec, rng);
}

BeliefNetwork gen_polytree(std::size_t n, std::size_t max_parents, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("a network needs at least one node");
  if (max_parents == 0 && n > 1) throw InvalidArgument("a connected poly-tree needs parents");
  Rng rng(seed);
  Dag dag(n);
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::size_t>(rng.below(v));
    const bool v_is_parent = rng.below(2) == 0;
    if (v_is_parent && dag[u].size() < max_parents) {
      dag[u].push_back(static_cast<VarId>(v));
    } else {
      dag[v].push_back(static_cast<VarId>(u));
    }
  }
  for (auto& pa : dag) std::sort(pa.begin(), pa.end());
  GenSpec spec;
  spec.n = n;
  return gen_uniform_cpts(dag, spec, rng);
}

Assignment forward_sample(const BeliefNetwork& bn, Rng& rng) {
  Assignment x(bn.size(), 0);
  for (VarId v : bn.topological_order()) {
    const double u = rng.uniform();
    double acc = 0.0;
    const int card = bn.cardinality(v);
    int pick = card - 1;
    for (int val = 0; val < card; ++val) {
      x[static_cast<std::size_t>(v)] = val;
      acc += bn.cpt(v).at(x);
      if (u < acc) {
        pick = val;
        break;
      }
    }
    x[static_cast<std::size_t>(v)] = pick;
  }
  return x;
}

Evidence gen_evidence(const BeliefNetwork& bn, std::size_t count, EvidencePolicy policy,
                      std::uint64_t seed) {
  if (count > bn.size()) throw InvalidArgument("more evidence variables than network variables");
  Evidence e;
  if (policy == EvidencePolicy::positive_ones) {
    for (std::size_t v = 0; v < count; ++v) e.set(static_cast<VarId>(v), 1);
    return e;
  }
  Rng rng(seed);
  const Assignment x = forward_sample(bn, rng);
  std::vector<VarId> ids(bn.size());
  std::iota(ids.begin(), ids.end(), 0);
  rng.shuffle(ids);
  for (std::size_t k = 0; k < count; ++k) e.set(ids[k], x[static_cast<std::size_t>(ids[k])]);
  return e;
}

}  // namespace mbe
