#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mbe/error.hpp"
#include "mbe/minibucket.hpp"
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

Factor random_factor(Scope s, const Domains& dom, Rng& rng) {
  std::size_t cells = 1;
  for (VarId v : s) cells *= static_cast<std::size_t>(dom.cardinality(v));
  std::vector<double> t(cells);
  for (double& x : t) x = rng.uniform();
  return Factor::over(std::move(s), dom, std::move(t));
}

std::vector<const Factor*> pointers(const std::vector<Factor>& fs) {
  std::vector<const Factor*> out;
  for (const Factor& f : fs) out.push_back(&f);
  return out;
}

Partitioning whole(std::size_t n) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  return {all};
}

double product_at(const std::vector<Factor>& fs, std::span<const int> x) {
  double p = 1.0;
  for (const Factor& f : fs) p *= f.is_scalar() ? f[0] : f.at(x);
  return p;
}

}  // namespace

TEST_CASE("canonical partition") {
  SUBCASE("decoder bucket collapses by subsumption") {
    const std::vector<Scope> s{{4}, {0, 1, 2, 3, 4}};
    CHECK(canonical_partition(s) == Partitioning{{0, 1}});
  }
  SUBCASE("incomparable scopes stay apart") {
    const std::vector<Scope> s{{0, 1}, {0, 2}, {0, 3}};
    CHECK(canonical_partition(s) == Partitioning{{0}, {1}, {2}});
  }
  SUBCASE("subset joins its earliest superset") {
    const std::vector<Scope> s{{0}, {0, 1}, {0, 2}};
    CHECK(canonical_partition(s) == Partitioning{{0, 1}, {2}});
  }
  SUBCASE("equal scopes go to the first") {
    const std::vector<Scope> s{{0, 1}, {0, 1}, {0, 1}};
    CHECK(canonical_partition(s) == Partitioning{{0, 1, 2}});
  }
}

TEST_CASE("im partition") {
  const std::vector<Scope> s{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  const std::vector<VarId> x{0};
  const Partitioning canon = canonical_partition(s);

  CHECK(im_partition(canon, MiniBucketConfig::by_m(1), s, x) == canon);
  CHECK(im_partition(canon, MiniBucketConfig::by_m(4), s, x) == whole(4));
  CHECK(im_partition(canon, MiniBucketConfig::by_m(2), s, x) == Partitioning{{0, 1}, {2, 3}});
  CHECK(im_partition(canon, MiniBucketConfig::by_i(5), s, x) == whole(4));
  CHECK(im_partition(canon, MiniBucketConfig::by_i(2), s, x) == Partitioning{{0, 1}, {2, 3}});
  CHECK(im_partition(canon, MiniBucketConfig::by_i(1), s, x) == canon);
  CHECK(im_partition(canon, MiniBucketConfig::by_i(3, 2), s, x) == Partitioning{{0, 1}, {2, 3}});

  SUBCASE("by_i scans for the first group that fits") {
    const std::vector<Scope> t{{0, 1, 2}, {0, 3, 4}, {0, 1}, {0, 2, 5}};
    const Partitioning q = im_partition(canonical_partition(t), MiniBucketConfig::by_i(3), t, x);
    CHECK(q == Partitioning{{0, 2, 3}, {1}});
  }
  SUBCASE("oversized blocks") {
    const std::vector<Scope> t{{0, 1, 2, 3}, {0, 4}};
    const Partitioning c = canonical_partition(t);
    CHECK(im_partition(c, MiniBucketConfig::by_i(2), t, x) == Partitioning{{0}, {1}});
    MiniBucketConfig strict = MiniBucketConfig::by_i(2);
    strict.strict = true;
    CHECK_THROWS_AS(im_partition(c, strict, t, x), InfeasibleConfig);
    strict.i = 3;
    CHECK_NOTHROW(im_partition(c, strict, t, x));
  }
  SUBCASE("zero parameters") {
    CHECK_THROWS_AS(MiniBucketConfig::by_i(0).validate(), InfeasibleConfig);
    CHECK_THROWS_AS(MiniBucketConfig::by_m(0).validate(), InfeasibleConfig);
  }
  SUBCASE("results are refinements of the full bucket and coarsen the canonical one") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Scope> t;
      const std::size_t nf = 1 + rng.below(7);
      for (std::size_t k = 0; k < nf; ++k) {
        Scope sc{0};
        for (VarId v = 1; v < 7; ++v) {
          if (rng.below(3) == 0) sc.push_back(v);
        }
        t.push_back(sc);
      }
      const Partitioning c = canonical_partition(t);
      const MiniBucketConfig cfg = rng.below(2) ? MiniBucketConfig::by_i(1 + rng.below(6), 1 + rng.below(4))
                                                : MiniBucketConfig::by_m(1 + rng.below(4), 1 + rng.below(6));
      const Partitioning q = im_partition(c, cfg, t, x);
      CHECK(is_refinement(c, q));
      CHECK(is_refinement(q, whole(nf)));
      for (const auto& block : q) {
        std::size_t heads = 0;
        for (const auto& cb : c) heads += std::find(block.begin(), block.end(), cb[0]) != block.end();
        CHECK(heads <= cfg.m);
      }
    }
  }
}

TEST_CASE("is_refinement") {
  const Partitioning singles{{0}, {1}, {2}};
  CHECK(is_refinement(singles, Partitioning{{0, 2}, {1}}));
  CHECK(is_refinement(Partitioning{{0, 2}, {1}}, Partitioning{{0, 2}, {1}}));
  CHECK_FALSE(is_refinement(Partitioning{{1, 2}, {3}}, Partitioning{{1}, {2, 3}}));
  CHECK_THROWS_AS(is_refinement(singles, Partitioning{{0, 1}}), InvalidArgument);
}

TEST_CASE("bucket processing") {
  const Domains dom(std::vector<int>(4, 2));
  Rng rng(31);
  const std::vector<VarId> x{0};

  SUBCASE("one mini-bucket is exact processing") {
    const std::vector<Factor> fs{random_factor({0, 1}, dom, rng), random_factor({0, 2, 3}, dom, rng)};
    const auto ptrs = pointers(fs);
    const auto mb = process_bucket_max(ptrs, x, whole(2));
    REQUIRE(mb.size() == 1);
    CHECK(mb[0] == kernels::combine_eliminate(ptrs, x, ElimOp::max));
    for (BoundMode mode : {BoundMode::upper, BoundMode::lower, BoundMode::mean}) {
      const auto sg = process_bucket_sum_guarded(ptrs, x, whole(2), mode);
      REQUIRE(sg.size() == 1);
      CHECK(sg[0] == kernels::combine_eliminate(ptrs, x, ElimOp::sum));
    }
  }
  SUBCASE("singletons over {X,A} and {X,B}") {
    const std::vector<Factor> fs{random_factor({0, 1}, dom, rng), random_factor({0, 2}, dom, rng)};
    const auto ptrs = pointers(fs);
    const auto split = process_bucket_max(ptrs, x, Partitioning{{0}, {1}});
    REQUIRE(split.size() == 2);
    CHECK(split[0].scope() == Scope{1});
    CHECK(split[1].scope() == Scope{2});
    const auto exact = process_bucket_max(ptrs, x, whole(2));
    Assignment a(4, 0);
    for (int cell = 0; cell < 4; ++cell) {
      a[1] = cell >> 1;
      a[2] = cell & 1;
      CHECK(leq(product_at(exact, a), product_at(split, a)));
    }
  }
  SUBCASE("split buckets bound the exact output and coarser splits are tighter") {
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Factor> fs;
      const std::size_t nf = 2 + rng.below(3);
      for (std::size_t k = 0; k < nf; ++k) {
        Scope s{0};
        for (VarId v = 1; v < 4; ++v) {
          if (rng.below(2)) s.push_back(v);
        }
        fs.push_back(random_factor(s, dom, rng));
      }
      const auto ptrs = pointers(fs);
      Partitioning singles;
      for (std::size_t k = 0; k < nf; ++k) singles.push_back({k});
      Partitioning pair{{0, 1}};
      for (std::size_t k = 2; k < nf; ++k) pair.push_back({k});
      REQUIRE(is_refinement(singles, pair));
      const auto exact = process_bucket_max(ptrs, x, whole(nf));
      const auto fine = process_bucket_max(ptrs, x, singles);
      const auto coarse = process_bucket_max(ptrs, x, pair);
      const auto up = process_bucket_sum_guarded(ptrs, x, singles, BoundMode::upper);
      const auto lo = process_bucket_sum_guarded(ptrs, x, singles, BoundMode::lower);
      const auto me = process_bucket_sum_guarded(ptrs, x, singles, BoundMode::mean);
      const auto sum = process_bucket_sum_guarded(ptrs, x, whole(nf), BoundMode::upper);
      Assignment a(4, 0);
      for (int cell = 0; cell < 8; ++cell) {
        a[1] = cell >> 2 & 1;
        a[2] = cell >> 1 & 1;
        a[3] = cell & 1;
        CHECK(leq(product_at(exact, a), product_at(coarse, a)));
        CHECK(leq(product_at(coarse, a), product_at(fine, a)));
        CHECK(leq(product_at(lo, a), product_at(sum, a)));
        CHECK(leq(product_at(sum, a), product_at(up, a)));
        CHECK(leq(product_at(lo, a), product_at(me, a)));
        CHECK(leq(product_at(me, a), product_at(up, a)));
      }
    }
  }
}

TEST_CASE("approx_mpe") {
  SUBCASE("full buckets are exact") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Instance in = random_instance(10, 16, 900 + s, s % 3);
      const Ordering d = min_fill(in.bn);
      const MpeResult exact = elim_mpe(in.bn, in.e, d);
      const BoundsResult b = approx_mpe(in.bn, in.e, d, MiniBucketConfig::by_i(10, 10));
      CHECK(close(b.upper, exact.value));
      CHECK(close(b.lower, exact.value));
      CHECK(b.diag.mb == 1);
    }
  }
  SUBCASE("sandwich") {
    for (std::uint64_t s = 0; s < 80; ++s) {
      const Instance in = random_instance(8, 6 + s % 14, 1000 + s, s % 4, 2 + static_cast<int>(s % 3 == 0));
      const Ordering d = min_fill(in.bn);
      const double exact = brute_mpe(in.bn, in.e).value;
      const MiniBucketConfig cfg =
          s % 2 ? MiniBucketConfig::by_i(1 + s % 4) : MiniBucketConfig::by_m(1 + s % 3);
      const BoundsResult b = approx_mpe(in.bn, in.e, d, cfg);
      CHECK(leq(b.lower, exact));
      CHECK(leq(exact, b.upper));
      CHECK(close(b.lower, joint_probability(in.bn, b.tuple, in.e)));
    }
  }
  SUBCASE("exact once i reaches the induced width") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Instance in = random_instance(14, 22, 1100 + s, 2);
      const Ordering d = min_fill(in.bn);
      const std::size_t w = induced_width(moral_graph(in.bn), d).induced_width;
      const double exact = elim_mpe(in.bn, in.e, d).value;
      const BoundsResult b = approx_mpe(in.bn, in.e, d, MiniBucketConfig::by_i(w));
      CHECK(close(b.upper, exact));
      CHECK(close(b.lower, exact));
    }
  }
  SUBCASE("recorded arity stays within i") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Instance in = random_instance(25, 60, 1200 + s);
      const Ordering d = min_fill(in.bn);
      for (std::size_t i = in.bn.max_family_size() - 1; i <= 8; ++i) {
        const BoundsResult b = approx_mpe(in.bn, in.e, d, MiniBucketConfig::by_i(i));
        CHECK(b.diag.fo <= i);
      }
    }
  }
  SUBCASE("trace of the eight-variable example with m = 1") {
    const BeliefNetwork bn = with_random_cpts(fig3_parents(), 12);
    EliminationTrace t;
    approx_mpe(bn, {}, identity(8), MiniBucketConfig::by_m(1), {}, &t);
    CHECK(generated_scopes(t) ==
          scopes({{H, G}, {G}, {E, F}, {E, D}, {E}, {B}, {D}, {C, B}, {C}, {B}}));
  }
  SUBCASE("m = 1 on a fork loses exactness") {
    // C has children A and B; eliminating C with its two child CPTs split
    // decouples them.
    const Domains dom({2, 2, 2});
    const BeliefNetwork bn(dom, {{2}, {2}, {}},
                           {Factor::over({0, 2}, dom, {0.9, 0.6, 0.1, 0.4}),
                            Factor::over({1, 2}, dom, {0.6, 0.1, 0.4, 0.9}),
                            Factor::over({2}, dom, {0.5, 0.5})});
    const Ordering d({0, 1, 2});
    const double exact = elim_mpe(bn, {}, d).value;
    const BoundsResult b = approx_mpe(bn, {}, d, MiniBucketConfig::by_m(1));
    CHECK(exact == doctest::Approx(0.27));
    CHECK(b.upper == doctest::Approx(0.405));
  }
  SUBCASE("strict infeasible configurations throw") {
    const Instance in = random_instance(10, 25, 3);
    MiniBucketConfig cfg = MiniBucketConfig::by_i(1);
    cfg.strict = true;
    CHECK_THROWS_AS(approx_mpe(in.bn, {}, min_fill(in.bn), cfg), InfeasibleConfig);
  }
}

TEST_CASE("approx_bel") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Instance in = random_instance(8, 10 + s % 6, 1300 + s, 1 + s % 3);
    const VarId q = static_cast<VarId>(s % 8);
    if (in.e.observed(q)) continue;
    const Ordering d = move_to_front(min_fill(in.bn), {q});
    const OracleBel o = brute_bel(in.bn, in.e, q);
    const MiniBucketConfig cfg = MiniBucketConfig::by_i(1 + s % 3);
    const BelBound up = approx_bel(in.bn, in.e, d, q, cfg, BoundMode::upper);
    const BelBound lo = approx_bel(in.bn, in.e, d, q, cfg, BoundMode::lower);
    const BelBound ex = approx_bel(in.bn, in.e, d, q, MiniBucketConfig::full(), BoundMode::mean);
    for (std::size_t k = 0; k < o.joint.size(); ++k) {
      CHECK(leq(lo.bound[k], o.joint[k]));
      CHECK(leq(o.joint[k], up.bound[k]));
      CHECK(close(ex.bound[k], o.joint[k]));
    }
    CHECK(leq(lo.p_evidence_bound, o.p_evidence));
    CHECK(leq(o.p_evidence, up.p_evidence_bound));
  }
}

TEST_CASE("approx_map") {
  SUBCASE("upper bounds the oracle and the lower bound is attained") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Instance in = random_instance(8, 11, 1400 + s, s % 3);
      std::vector<VarId> hyp{static_cast<VarId>(s % 8), static_cast<VarId>((s + 2) % 8),
                             static_cast<VarId>((s + 6) % 8)};
      const Ordering d = move_to_front(min_fill(in.bn), hyp);
      const OracleMap o = brute_map(in.bn, in.e, hyp);
      const BoundsResult b = approx_map(in.bn, in.e, d, hyp, MiniBucketConfig::by_i(1 + s % 3));
      CHECK(leq(o.value, b.upper));
      REQUIRE(b.has_lower);
      CHECK(leq(b.lower, o.value));
    }
  }
  SUBCASE("all variables hypothesised reduces to approx_mpe") {
    const Instance in = random_instance(9, 14, 1500, 2);
    const Ordering d = min_fill(in.bn);
    const BoundsResult a = approx_mpe(in.bn, in.e, d, MiniBucketConfig::by_i(2));
    const BoundsResult b = approx_map(in.bn, in.e, d, d.order(), MiniBucketConfig::by_i(2));
    CHECK(close(a.upper, b.upper));
    CHECK(close(a.lower, b.lower));
  }
  SUBCASE("decoder network with m = 1 matches exact map") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Turbo tc = turbo(s);
      EliminationTrace t;
      const BoundsResult b = approx_map(tc.bn, tc.e, tc.d, tc.hyp, MiniBucketConfig::by_m(1), {}, &t);
      CHECK(close(b.upper, elim_map(tc.bn, tc.e, tc.d, tc.hyp).value));
      CHECK(generated_scopes(t) ==
            scopes({{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}, {1, 2, 3}, {2, 3}, {3}}));
    }
  }
}

TEST_CASE("bound ratios") {
  const Ratios same = bound_ratios(0.5, 0.5, 0.5);
  CHECK(same.ml == 1.0);
  CHECK(same.um == 1.0);
  CHECK(same.ul == 1.0);
  const Ratios r = bound_ratios(2e-6, 4e-6, 1e-6);
  CHECK(r.ml == doctest::Approx(2));
  CHECK(r.um == doctest::Approx(2));
  CHECK(r.ul == doctest::Approx(4));
  const Ratios z = bound_ratios(std::nullopt, 1e-3, 0.0);
  CHECK(std::isnan(z.ml));
  CHECK(std::isnan(z.um));
  CHECK(std::isinf(z.ul));
  CHECK(bound_ratios(0.0, 0.0, 0.0).ml == 1.0);
}
