#include <doctest.h>

#include <numeric>

#include "mbe/oracle.hpp"
#include "mbe/search.hpp"
#include "support.hpp"

using namespace mbe;
using namespace testkit;

TEST_CASE("heuristic") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Instance in = random_instance(7, 9 + s % 6, 2000 + s, s % 3);
    const Ordering d = min_fill(in.bn);
    const MiniBucketConfig cfg = MiniBucketConfig::by_i(1 + s % 3);
    EliminationTrace t;
    const BoundsResult b = approx_mpe(in.bn, in.e, d, cfg, {}, &t);
    const MiniBucketHeuristic h(in.bn, in.e, d, t);

    Assignment x(7, 0);
    CHECK(close(h.evaluate(x, 0).f(), b.upper));
    for (int code = 0; code < 128; ++code) {
      for (int v = 0; v < 7; ++v) x[static_cast<std::size_t>(v)] = code >> v & 1;
      const double p = joint_probability(in.bn, x, in.e);
      // f of every prefix bounds each of its completions
      for (std::size_t k = 0; k <= 7; ++k) CHECK(leq(p, h.evaluate(x, k).f()));
      CHECK(close(h.evaluate(x, 7).f(), p));
    }
  }
}

TEST_CASE("best-first search") {
  SUBCASE("optimal and non-increasing") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Instance in = random_instance(8, 8 + s % 10, 2100 + s, s % 4);
      const Ordering d = min_fill(in.bn);
      const SearchResult r = best_first_mpe(in.bn, in.e, d, MiniBucketConfig::by_i(1 + s % 3));
      CHECK(close(r.value, brute_mpe(in.bn, in.e).value));
      CHECK(close(joint_probability(in.bn, r.assignment, in.e), r.value));
      for (std::size_t k = 1; k < r.popped_f.size(); ++k) CHECK(r.popped_f[k] <= r.popped_f[k - 1]);
      CHECK(leq(r.value, r.heuristic_upper));
    }
  }
  SUBCASE("exact heuristic walks one path") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Instance in = random_instance(10, 14, 2200 + s, 2);
      const SearchResult r = best_first_mpe(in.bn, in.e, min_fill(in.bn), MiniBucketConfig::full());
      CHECK(r.stats.expanded <= 10);
    }
  }
  SUBCASE("deterministic network") {
    const Domains dom(std::vector<int>(4, 2));
    const BeliefNetwork bn(dom, {{}, {0}, {1}, {2}},
                           {Factor::over({0}, dom, {0.0, 1.0}), Factor::over({0, 1}, dom, {1, 0, 0, 1}),
                            Factor::over({1, 2}, dom, {0, 1, 1, 0}), Factor::over({2, 3}, dom, {1, 0, 0, 1})});
    const SearchResult r = best_first_mpe(bn, {}, Ordering({0, 1, 2, 3}), MiniBucketConfig::by_i(1));
    CHECK(r.value == 1.0);
    CHECK(r.assignment == Assignment{1, 1, 0, 0});
    CHECK(r.stats.expanded == 4);
  }
  SUBCASE("frontier cap") {
    const Instance in = random_instance(18, 40, 2300);
    try {
      best_first_mpe(in.bn, {}, min_fill(in.bn), MiniBucketConfig::by_i(1), {}, 3);
      FAIL("expected the frontier to overflow");
    } catch (const SearchExhausted& ex) {
      const BoundsResult b = approx_mpe(in.bn, {}, min_fill(in.bn), MiniBucketConfig::by_i(1));
      CHECK(ex.best_lower() == b.lower);
      CHECK(ex.best_tuple() == b.tuple);
    }
  }
}
