#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mbe/elimination.hpp"
#include "mbe/generators.hpp"
#include "mbe/graph.hpp"

namespace testkit {

using namespace mbe;

inline bool close(double a, double b, double rel = 1e-9) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel * scale || scale <= 1e-300;
}

/// a <= b up to 1e-9 relative with a 1e-300 absolute floor.
inline bool leq(double a, double b, double rel = 1e-9) {
  return a <= b + rel * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

/// Random CPTs over a fixed structure.
inline BeliefNetwork with_random_cpts(const Dag& parents, std::uint64_t seed, int card = 2) {
  GenSpec spec;
  spec.n = parents.size();
  spec.cardinality = card;
  Rng rng(seed);
  return gen_uniform_cpts(parents, spec, rng);
}

// B C D E F G H I of the eight-variable example, as ids 0..7, so the
// ordering (B, C, D, E, F, G, H, I) is the identity.
enum Fig3 : VarId { B, C, D, E, F, G, H, I };

inline Dag fig3_parents() {
  Dag pa(8);
  pa[I] = {G, H};
  pa[H] = {E, F};
  pa[G] = {D, E};
  pa[F] = {B};
  pa[E] = {B, C};
  pa[D] = {C};
  return pa;
}

inline const char* fig3_name(VarId v) {
  static const char* names[] = {"B", "C", "D", "E", "F", "G", "H", "I"};
  return names[v];
}

// Turbo-code decoder: information bits U1..U4 (0..3), code fragments X1..X3
// (4..6), channel outputs y1..y3 (7..9) and ys1..ys4 (10..13).
struct Turbo {
  static constexpr VarId U1 = 0, X1 = 4, Y1 = 7, YS1 = 10;
  BeliefNetwork bn;
  Evidence e;
  Ordering d;
  std::vector<VarId> hyp{0, 1, 2, 3};
};

inline Turbo turbo(std::uint64_t seed) {
  Dag pa(14);
  for (VarId x = 4; x <= 6; ++x) pa[static_cast<std::size_t>(x)] = {0, 1, 2, 3};
  for (VarId k = 0; k < 3; ++k) pa[static_cast<std::size_t>(7 + k)] = {4 + k};
  for (VarId k = 0; k < 4; ++k) pa[static_cast<std::size_t>(10 + k)] = {k};
  Turbo t;
  t.bn = with_random_cpts(pa, seed);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (VarId v = 7; v < 14; ++v) t.e.set(v, static_cast<int>(rng.below(2)));
  t.d = Ordering({3, 2, 1, 0, 6, 5, 4, 7, 8, 9, 10, 11, 12, 13});
  return t;
}

/// Scopes of the non-scalar functions a run generated (restrictions of
/// observed buckets excluded), as a sorted multiset.
inline std::multiset<Scope> generated_scopes(const EliminationTrace& t) {
  std::multiset<Scope> out;
  for (const RecordedFunction* r : t.generated()) {
    if (!r->function.is_scalar()) out.insert(r->function.scope());
  }
  return out;
}

inline std::multiset<Scope> scopes(std::initializer_list<Scope> list) {
  std::multiset<Scope> out;
  for (Scope s : list) {
    std::sort(s.begin(), s.end());
    out.insert(s);
  }
  return out;
}

struct Instance {
  BeliefNetwork bn;
  Evidence e;
};

/// Uniform random network with `evidence` sampled observations.
inline Instance random_instance(std::size_t n, std::size_t edges, std::uint64_t seed,
                                std::size_t evidence = 0, int card = 2) {
  GenSpec spec;
  spec.n = n;
  spec.e = edges;
  spec.cardinality = card;
  spec.seed = seed;
  Instance inst{generate(spec), {}};
  inst.e = gen_evidence(inst.bn, evidence, EvidencePolicy::sampled, seed + 7919);
  return inst;
}

inline Ordering min_fill(const BeliefNetwork& bn) {
  return find_ordering(moral_graph(bn), OrderingStrategy::min_fill);
}

}  // namespace testkit
