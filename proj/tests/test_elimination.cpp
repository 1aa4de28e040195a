#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "mbe/buckets.hpp"
#include "mbe/elimination.hpp"
#include "mbe/error.hpp"
#include "mbe/oracle.hpp"
#include "support.hpp"

using namespace mbe;
using namespace testkit;

namespace {

Ordering identity(std::size_t n) {
  std::vector<VarId> o(n);
  std::iota(o.begin(), o.end(), 0);
  return Ordering(o);
}

BeliefNetwork independent(std::size_t n, double p1) {
  const Domains dom(std::vector<int>(n, 2));
  std::vector<Factor> cpts;
  for (VarId v = 0; v < static_cast<VarId>(n); ++v) cpts.push_back(Factor::over({v}, dom, {1 - p1, p1}));
  return BeliefNetwork(dom, Dag(n), cpts);
}

}  // namespace

TEST_CASE("partition_buckets") {
  SUBCASE("eight-variable example") {
    const BeliefNetwork bn = with_random_cpts(fig3_parents(), 1);
    const BucketPartition p = partition_buckets(bn.cpts(), identity(8), {});
    REQUIRE(p.buckets.size() == 8);
    for (VarId v = 0; v < 8; ++v) {
      const Bucket& b = p.buckets[static_cast<std::size_t>(v)];
      REQUIRE(b.factors.size() == 1);
      CHECK(b.factors[0] == bn.cpt(v));
    }
  }
  SUBCASE("highest variable rule") {
    const Domains dom({2, 2});
    const std::vector<Factor> fs{Factor::over({0}, dom, {0.5, 0.5}),
                                 Factor::over({0, 1}, dom, {0.1, 0.9, 0.4, 0.6}),
                                 Factor::scalar(0.25)};
    const BucketPartition p = partition_buckets(fs, identity(2), Evidence{{1, 0}});
    CHECK(p.buckets[0].factors.size() == 1);
    CHECK(p.buckets[1].factors.size() == 1);
    CHECK(p.buckets[1].observed_value == 0);
    CHECK_FALSE(p.buckets[0].observed_value.has_value());
    CHECK(p.constant == 0.25);
    const BucketPartition q = partition_buckets(fs, Ordering({1, 0}), {});
    CHECK(q.buckets[1].factors.size() == 2);
    CHECK(q.buckets[0].factors.empty());
  }
}

TEST_CASE("elim_mpe") {
  SUBCASE("independent variables") {
    const MpeResult r = elim_mpe(independent(6, 0.7), {}, identity(6));
    CHECK(close(r.value, std::pow(0.7, 6)));
    CHECK(r.assignment == Assignment(6, 1));
  }
  SUBCASE("recorded scopes of the eight-variable example") {
    const BeliefNetwork bn = with_random_cpts(fig3_parents(), 3);
    const MpeResult r = elim_mpe(bn, {}, identity(8));
    CHECK(generated_scopes(r.trace) ==
          scopes({{H, G}, {E, F, G}, {E, F, D}, {E, B, D}, {C, B, D}, {C, B}, {B}}));
    CHECK(r.trace.max_arity == 3);
    CHECK(r.trace.max_family == 3);
  }
  SUBCASE("agrees with the oracle and the tuple scores the value") {
    for (std::uint64_t s = 0; s < 60; ++s) {
      const Instance in = random_instance(8, 8 + s % 9, 100 + s, s % 4, 2 + static_cast<int>(s % 2));
      const MpeResult r = elim_mpe(in.bn, in.e, min_fill(in.bn));
      const OracleMpe o = brute_mpe(in.bn, in.e);
      CHECK(close(r.value, o.value));
      CHECK(close(joint_probability(in.bn, r.assignment, in.e), r.value));
      CHECK(in.e.consistent(r.assignment));
    }
  }
  SUBCASE("lowest-index tie break") {
    const MpeResult r = elim_mpe(independent(4, 0.5), {}, identity(4));
    CHECK(r.assignment == Assignment(4, 0));
  }
  SUBCASE("F_o equals w* without evidence") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const Instance in = random_instance(12, 20, 200 + s);
      const Ordering d = min_fill(in.bn);
      const MpeResult r = elim_mpe(in.bn, {}, d);
      CHECK(r.trace.max_arity == induced_width(moral_graph(in.bn), d).induced_width);
    }
  }
  SUBCASE("invariant across orderings") {
    Rng rng(4);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Instance in = random_instance(9, 13, 300 + s, 2);
      const double ref = elim_mpe(in.bn, in.e, identity(9)).value;
      for (int k = 0; k < 5; ++k) {
        std::vector<VarId> o(9);
        std::iota(o.begin(), o.end(), 0);
        rng.shuffle(o);
        CHECK(close(elim_mpe(in.bn, in.e, Ordering(o)).value, ref));
      }
    }
  }
  SUBCASE("kernel modes give identical results") {
    const Instance in = random_instance(14, 30, 7, 3);
    const Ordering d = min_fill(in.bn);
    ElimOptions a, b;
    a.kernel = kernels::Mode::reference;
    b.kernel = kernels::Mode::parallel;
    const MpeResult ra = elim_mpe(in.bn, in.e, d, a), rb = elim_mpe(in.bn, in.e, d, b);
    CHECK(ra.value == rb.value);
    CHECK(ra.assignment == rb.assignment);
  }
  SUBCASE("memory cap") {
    const Instance in = random_instance(16, 60, 8);
    ElimOptions opts;
    opts.max_cells = 8;
    CHECK_THROWS_AS(elim_mpe(in.bn, {}, min_fill(in.bn), opts), ResourceError);
  }
  SUBCASE("impossible evidence") {
    const Domains dom({2, 2});
    const BeliefNetwork bn(dom, {{}, {0}},
                           {Factor::over({0}, dom, {0.4, 0.6}), Factor::over({0, 1}, dom, {1, 0, 1, 0})});
    const MpeResult r = elim_mpe(bn, Evidence{{1, 1}}, identity(2));
    CHECK(r.value == 0.0);
    CHECK(r.evidence_impossible);
    const BelResult b = elim_bel(bn, Evidence{{1, 1}}, identity(2), 0);
    CHECK(b.evidence_impossible);
    CHECK(b.posterior().empty());
  }
}

TEST_CASE("elim_bel") {
  SUBCASE("no evidence sums to one") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Instance in = random_instance(10, 16, 400 + s);
      const BelResult r = elim_bel(in.bn, {}, move_to_front(min_fill(in.bn), {3}), 3);
      CHECK(r.p_evidence == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("two-node Bayes rule") {
    const Domains dom({2, 2});
    const BeliefNetwork bn(dom, {{}, {0}},
                           {Factor::over({0}, dom, {0.3, 0.7}),
                            Factor::over({0, 1}, dom, {0.9, 0.1, 0.2, 0.8})});
    const BelResult r = elim_bel(bn, Evidence{{1, 1}}, identity(2), 0);
    CHECK(r.joint[0] == doctest::Approx(0.03));
    CHECK(r.joint[1] == doctest::Approx(0.56));
    CHECK(r.p_evidence == doctest::Approx(0.59));
    CHECK(r.posterior()[1] == doctest::Approx(0.56 / 0.59));
  }
  SUBCASE("agrees with the oracle") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Instance in = random_instance(8, 10, 500 + s, s % 3, 2 + static_cast<int>(s % 2));
      const VarId q = static_cast<VarId>(s % 8);
      const BelResult r = elim_bel(in.bn, in.e, move_to_front(min_fill(in.bn), {q}), q);
      const OracleBel o = brute_bel(in.bn, in.e, q);
      CHECK(close(r.p_evidence, o.p_evidence));
      REQUIRE(r.joint.size() == o.joint.size());
      for (std::size_t k = 0; k < o.joint.size(); ++k) CHECK(close(r.joint[k], o.joint[k]));
    }
  }
  SUBCASE("query must come first") {
    const Instance in = random_instance(5, 5, 1);
    CHECK_THROWS_AS(elim_bel(in.bn, {}, identity(5), 2), InvalidArgument);
  }
}

TEST_CASE("elim_map") {
  SUBCASE("all variables hypothesised equals mpe") {
    const Instance in = random_instance(8, 12, 600, 2);
    std::vector<VarId> all(8);
    std::iota(all.begin(), all.end(), 0);
    const MapResult r = elim_map(in.bn, in.e, identity(8), all);
    CHECK(close(r.value, elim_mpe(in.bn, in.e, identity(8)).value));
  }
  SUBCASE("one hypothesis variable is the belief argmax") {
    const Instance in = random_instance(8, 12, 601, 2);
    const Ordering d = move_to_front(min_fill(in.bn), {5});
    const MapResult m = elim_map(in.bn, in.e, d, {5});
    const BelResult b = elim_bel(in.bn, in.e, d, 5);
    CHECK(close(m.value, std::max(b.joint[0], b.joint[1])));
    CHECK(close(m.p_evidence, b.p_evidence));
  }
  SUBCASE("agrees with the oracle") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Instance in = random_instance(8, 11, 700 + s, s % 3);
      std::vector<VarId> hyp{static_cast<VarId>(s % 8), static_cast<VarId>((s + 3) % 8),
                             static_cast<VarId>((s + 5) % 8)};
      const MapResult r = elim_map(in.bn, in.e, move_to_front(min_fill(in.bn), hyp), hyp);
      const OracleMap o = brute_map(in.bn, in.e, hyp);
      CHECK(close(r.value, o.value));
      CHECK(r.hyp == o.hyp);
      CHECK(r.hyp_values == o.hyp_values);
    }
  }
  SUBCASE("hypothesis must lead the ordering") {
    const Instance in = random_instance(5, 5, 1);
    CHECK_THROWS_AS(elim_map(in.bn, {}, identity(5), {4}), InvalidArgument);
  }
}

TEST_CASE("super-buckets") {
  SUBCASE("co-parents merge") {
    const BeliefNetwork bn = with_random_cpts(Dag{{}, {}, {0, 1}}, 1);
    const Ordering d({2, 0, 1});
    std::vector<Bucket> b = partition_buckets(bn.cpts(), d, {}).buckets;
    const auto g = super_bucket_grouping(b, bn, d);
    REQUIRE(g.size() == 2);
    CHECK(g[1].vars == std::vector<VarId>{0, 1});
  }
  SUBCASE("observed buckets stay apart") {
    const BeliefNetwork bn = with_random_cpts(Dag{{}, {}, {0, 1}}, 1);
    const Ordering d({2, 0, 1});
    const Evidence e{{1, 0}};
    const auto g = super_bucket_grouping(partition_buckets(bn.cpts(), d, e).buckets, bn, d);
    CHECK(g.size() == 3);
  }
  SUBCASE("poly-trees keep the exact value") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const BeliefNetwork bn = gen_polytree(15, 3, 800 + s);
      const Evidence e = gen_evidence(bn, s % 3, EvidencePolicy::sampled, s);
      const Ordering d = legal_ordering(bn, e);
      ElimOptions opts;
      opts.super_buckets = true;
      const MpeResult a = elim_mpe(bn, e, d), b = elim_mpe(bn, e, d, opts);
      CHECK(close(a.value, b.value));
      CHECK(close(joint_probability(bn, b.assignment, e), b.value));
    }
  }
  SUBCASE("no co-parent runs means no merging") {
    const BeliefNetwork bn = with_random_cpts(fig3_parents(), 2);
    const auto g = super_bucket_grouping(partition_buckets(bn.cpts(), identity(8), {}).buckets, bn,
                                         identity(8));
    // B,C are parents of E, D,E of G, E,F of H, G,H of I
    std::size_t merged = 0;
    for (const Bucket& b : g) merged += b.is_super();
    CHECK(merged >= 1);
    for (const Bucket& b : g) {
      if (!b.is_super()) continue;
      bool family = false;
      for (VarId c = 0; c < 8; ++c) {
        const auto& pa = bn.parents(c);
        family |= std::all_of(b.vars.begin(), b.vars.end(), [&](VarId v) {
          return std::find(pa.begin(), pa.end(), v) != pa.end();
        });
      }
      CHECK(family);
    }
  }
}

TEST_CASE("move_to_front") {
  CHECK(move_to_front(identity(5), {3, 1}) == Ordering({3, 1, 0, 2, 4}));
  CHECK(move_to_front(identity(3), {}) == identity(3));
}
