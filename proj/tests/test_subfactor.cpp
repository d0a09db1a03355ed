#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "subf/group.hpp"
#include "subf/subfactor.hpp"
#include "subf/subset.hpp"

using namespace subf;

namespace {

bool direct_by_counting(const FiniteGroup& g, std::uint64_t am, std::uint64_t bm) {
  std::vector<int> hits(static_cast<std::size_t>(g.order()), 0);
  for (ElementId x : Subset(g, am).elements())
    for (ElementId y : Subset(g, bm).elements())
      if (++hits[g.mul(x, y)] > 1) return false;
  return true;
}

// Definitional oracle for the right family, independent of the engine.
SubsetFamily right_family_oracle(const FiniteGroup& g, const Subset& a) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 1; b <= g.full_mask(); ++b) {
    if (!direct_by_counting(g, a.mask(), b)) continue;
    bool maximal = true;
    for (int e = 0; e < g.order() && maximal; ++e)
      if (!((b >> e) & 1) && direct_by_counting(g, a.mask(), b | (std::uint64_t{1} << e)))
        maximal = false;
    if (maximal) out.push_back(b);
  }
  return SubsetFamily(g, std::move(out));
}

// Left-side oracle straight from the definition: maximal B with BA direct.
SubsetFamily left_family_oracle(const FiniteGroup& g, const Subset& a) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 1; b <= g.full_mask(); ++b) {
    if (!direct_by_counting(g, b, a.mask())) continue;
    bool maximal = true;
    for (int e = 0; e < g.order() && maximal; ++e)
      if (!((b >> e) & 1) && direct_by_counting(g, b | (std::uint64_t{1} << e), a.mask()))
        maximal = false;
    if (maximal) out.push_back(b);
  }
  return SubsetFamily(g, std::move(out));
}

SubsetFamily family_of(const FiniteGroup& g, std::vector<std::uint64_t> masks) {
  return SubsetFamily(g, std::move(masks));
}

}  // namespace

TEST_CASE("membership criteria") {
  FiniteGroup z6 = parse_group_spec("C6");
  Subset a = Subset::of(z6, {0, 1});
  CHECK(is_right_subfactor(a, Subset::of(z6, {0, 3}), Criterion::eq21));
  CHECK(is_right_subfactor(a, Subset::of(z6, {0, 3}), Criterion::eq23));
  // direct but extendable, hence not a sub-factor
  CHECK_FALSE(is_right_subfactor(a, Subset::of(z6, {0}), Criterion::eq21));
  CHECK_FALSE(is_right_subfactor(a, Subset::of(z6, {0}), Criterion::eq23));

  FiniteGroup z5 = parse_group_spec("C5");
  Subset a5 = Subset::of(z5, {0, 1});
  Subset b5 = Subset::of(z5, {2, 4});
  CHECK(is_right_subfactor(a5, b5));
  CHECK_FALSE(is_right_factor(a5, b5));  // 2*2 != 5

  CHECK_THROWS_AS(is_right_subfactor(Subset::empty(z6), a), EmptySubsetError);
  CHECK_THROWS_AS(is_right_subfactor(a, Subset::empty(z6)), EmptySubsetError);
}

TEST_CASE("criterion agreement, exhaustive at order <= 8") {
  for (const char* s : {"C5", "C6", "S3", "C7", "C8", "D8", "Q8", "C2^3", "C4xC2"}) {
    FiniteGroup g = parse_group_spec(s);
    int agreements = 0;
    for (std::uint64_t am = 1; am <= g.full_mask(); ++am) {
      Subset a(g, am);
      for (std::uint64_t bm = 1; bm <= g.full_mask(); ++bm) {
        Subset b(g, bm);
        if (is_right_subfactor(a, b, Criterion::eq21) !=
            is_right_subfactor(a, b, Criterion::eq23)) {
          CAPTURE(a.to_string());
          CAPTURE(b.to_string());
          FAIL("criteria disagree");
        }
        ++agreements;
      }
    }
    CHECK(agreements > 0);
  }
}

TEST_CASE("criterion agreement, random pairs at orders 9..16") {
  std::mt19937_64 rng(2024);
  for (const char* s : {"C3xC3", "C10", "D12", "C13", "D14", "C15", "QD16", "C4xC4"}) {
    FiniteGroup g = parse_group_spec(s);
    for (int i = 0; i < 10'000; ++i) {
      std::uint64_t am = rng() & g.full_mask();
      std::uint64_t bm = rng() & g.full_mask();
      if (am == 0 || bm == 0) continue;
      Subset a(g, am), b(g, bm);
      if (is_right_subfactor(a, b, Criterion::eq21) !=
          is_right_subfactor(a, b, Criterion::eq23)) {
        CAPTURE(a.to_string());
        CAPTURE(b.to_string());
        FAIL("criteria disagree");
      }
    }
  }
}

TEST_CASE("factor test") {
  FiniteGroup z6 = parse_group_spec("C6");
  CHECK(is_right_factor(Subset::of(z6, {0, 1}), Subset::of(z6, {0, 2, 4})));
  CHECK(is_right_factor(Subset::full(z6), Subset::of(z6, {0})));
  CHECK_FALSE(is_right_factor(Subset::of(z6, {0, 1}), Subset::of(z6, {0, 3})));
  CHECK_FALSE(is_right_factor(Subset::empty(z6), Subset::full(z6)));
  // every factor is a sub-factor: exhaustive at order <= 8
  for (const char* s : {"C5", "C6", "S3", "C7", "C8", "D8", "Q8", "C2^3", "C4xC2"}) {
    FiniteGroup g = parse_group_spec(s);
    int factors = 0;
    for (std::uint64_t am = 1; am <= g.full_mask(); ++am)
      for (std::uint64_t bm = 1; bm <= g.full_mask(); ++bm) {
        Subset a(g, am), b(g, bm);
        if (is_right_factor(a, b)) {
          ++factors;
          if (!is_right_subfactor(a, b)) {
            CAPTURE(a.to_string());
            CAPTURE(b.to_string());
            FAIL("factor that is not a sub-factor");
          }
        }
      }
    CHECK(factors > 0);
  }
}

TEST_CASE("greedy construction") {
  FiniteGroup z6 = parse_group_spec("C6");
  Subset a = Subset::of(z6, {0, 1});
  auto [b, trace] = greedy_right_subfactor(a, 0, Chooser::deterministic_min);
  CHECK(b == Subset::of(z6, {0, 2, 4}));
  REQUIRE(trace.states.size() == 3);
  CHECK(trace.states[0] == Subset::of(z6, {2, 3, 4}));
  CHECK(trace.states[1] == Subset::of(z6, {4}));
  CHECK(trace.states[2].is_empty());
  CHECK(trace.chosen == std::vector<ElementId>{2, 4});
  CHECK(trace.terminal() == 2);

  // |A| > |G|/2: the candidate state starts empty, B = {g0}
  Subset big = Subset::of(z6, {0, 1, 2, 3});
  for (int g0 = 0; g0 < 6; ++g0) {
    auto [bb, tt] = greedy_right_subfactor(big, g0, Chooser::deterministic_min);
    CHECK(bb == Subset::of(z6, {g0}));
    CHECK(tt.terminal() == 0);
  }
}

TEST_CASE("greedy soundness and trace invariants") {
  for (const char* s : {"C6", "S3", "D8", "C3xC3"}) {
    FiniteGroup g = parse_group_spec(s);
    std::uint64_t cl_full = g.full_mask();
    for (std::uint64_t am = 1; am <= cl_full; am += 3) {
      Subset a(g, am);
      for (int g0 = 0; g0 < g.order(); g0 += 2) {
        for (std::uint64_t seed : {0ull, 7ull}) {
          auto [b, trace] =
              greedy_right_subfactor(a, g0, Chooser::seeded_random, seed);
          CHECK(is_right_subfactor(a, b));
          CHECK(b.size() == trace.terminal() + 1);
          // states shrink, chosen elements come from the previous state
          Subset cl = left_complement(a);
          Subset expect = translate(cl, g0, Side::right);
          REQUIRE(!trace.states.empty());
          CHECK(trace.states[0] == expect);
          for (std::size_t i = 0; i < trace.chosen.size(); ++i) {
            CHECK(trace.states[i].contains(trace.chosen[i]));
            Subset next = Subset(
                g, trace.states[i].mask() &
                       translate(cl, trace.chosen[i], Side::right).mask());
            CHECK(trace.states[i + 1] == next);
          }
          CHECK(trace.states.back().is_empty());
        }
      }
    }
  }
}

TEST_CASE("example family in Z6") {
  FiniteGroup z6 = parse_group_spec("C6");
  Subset a = Subset::of(z6, {0, 1});
  SubsetFamily expected = family_of(
      z6, {(1u << 0) | (1u << 2) | (1u << 4), (1u << 0) | (1u << 3), (1u << 1) | (1u << 3) | (1u << 5),
           (1u << 1) | (1u << 4), (1u << 2) | (1u << 5)});
  for (auto mode : {EnumerationMode::bounded_search, EnumerationMode::algorithm_branching,
                    EnumerationMode::brute_force}) {
    CHECK(enumerate_right_subfactors(a, mode, /*normalized=*/false) == expected);
  }
  // normalized view keeps the identity-containing members only
  SubsetFamily norm = enumerate_right_subfactors(a, EnumerationMode::bounded_search, true);
  REQUIRE(norm.size() == 2);
  CHECK(norm.members()[0] == Subset::of(z6, {0, 3}));
  CHECK(norm.members()[1] == Subset::of(z6, {0, 2, 4}));
  // abelian: left family coincides
  CHECK(enumerate_left_subfactors(a, EnumerationMode::bounded_search) == expected);
}

TEST_CASE("example family in D8") {
  FiniteGroup d8 = parse_group_spec("D8");
  Subset a = parse_subset(d8, "a,a^2,b");
  auto mask2 = [](int x, int y) { return (std::uint64_t{1} << x) | (std::uint64_t{1} << y); };
  // elements: 1,a,a^2,a^3 = 0..3 and b,ab,a^2b,a^3b = 4..7
  SubsetFamily expected = family_of(
      d8, {mask2(0, 2), mask2(0, 4), mask2(0, 5), mask2(1, 3), mask2(1, 4), mask2(1, 7),
           mask2(2, 6), mask2(2, 7), mask2(3, 5), mask2(3, 6), mask2(4, 6), mask2(5, 7)});
  for (auto mode : {EnumerationMode::bounded_search, EnumerationMode::algorithm_branching,
                    EnumerationMode::brute_force}) {
    SubsetFamily fam = enumerate_right_subfactors(a, mode, false);
    CHECK(fam == expected);
    for (const Subset& s : fam.members()) CHECK(s.size() == 2);
  }
  CHECK(right_family_oracle(d8, a) == expected);
}

TEST_CASE("trivial group") {
  FiniteGroup c1 = parse_group_spec("C1");
  Subset a = Subset::of(c1, {0});
  SubsetFamily fam = enumerate_right_subfactors(a, EnumerationMode::bounded_search, false);
  REQUIRE(fam.size() == 1);
  CHECK(fam.members()[0] == a);
}

TEST_CASE("three modes agree and obey bounds, order <= 6 exhaustive") {
  for (const char* s : {"C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3"}) {
    FiniteGroup g = parse_group_spec(s);
    for (std::uint64_t am = 1; am <= g.full_mask(); am += 2) {  // identity-containing
      Subset a(g, am);
      SubsetFamily bounded =
          enumerate_right_subfactors(a, EnumerationMode::bounded_search, true);
      SubsetFamily branching =
          enumerate_right_subfactors(a, EnumerationMode::algorithm_branching, true);
      SubsetFamily brute = enumerate_right_subfactors(a, EnumerationMode::brute_force, true);
      CHECK(bounded == branching);
      CHECK(bounded == brute);
      CHECK(bounded.size() > 0);

      // size bounds from the containment in C^1_l(A)
      Subset dif = difference_set(a, Side::left);
      int lb = (g.order() + dif.size() - 1) / dif.size();
      int ub = g.order() / a.size();
      std::uint64_t c1_mask = left_complement(a).mask() | 1;
      for (const Subset& b : bounded.members()) {
        CHECK(b.size() >= lb);
        CHECK(b.size() <= ub);
        CHECK((b.mask() & ~c1_mask) == 0);
      }

      // unnormalized family = all right translates, and is translation invariant
      SubsetFamily all = enumerate_right_subfactors(a, EnumerationMode::bounded_search, false);
      CHECK(all == right_family_oracle(g, a));
      for (int e = 0; e < g.order(); ++e) {
        Subset ta = translate(a, e, Side::left);
        CHECK(enumerate_right_subfactors(ta, EnumerationMode::bounded_search, false) == all);
      }
    }
  }
}

TEST_CASE("bounded and branching engines agree on sampled mid-order instances") {
  std::mt19937_64 rng(77);
  for (const char* s : {"C3xC3", "D10", "C12", "A4", "D12", "C13", "D14"}) {
    FiniteGroup g = parse_group_spec(s);
    for (int i = 0; i < 40; ++i) {
      std::uint64_t am = (rng() & g.full_mask()) | 1;
      Subset a(g, am);
      CHECK(enumerate_right_subfactors(a, EnumerationMode::bounded_search, false) ==
            enumerate_right_subfactors(a, EnumerationMode::algorithm_branching, false));
    }
  }
}

TEST_CASE("left families") {
  FiniteGroup s3 = parse_group_spec("S3");
  Subset a = parse_subset(s3, "(),(2,3)");
  CHECK(inverse(a) == a);
  SubsetFamily right = enumerate_right_subfactors(a, EnumerationMode::bounded_search, false);
  SubsetFamily left = enumerate_left_subfactors(a, EnumerationMode::bounded_search);
  CHECK_FALSE(right == left);
  CHECK(left == left_family_oracle(s3, a));

  FiniteGroup c3 = parse_group_spec("C3");
  Subset a3 = Subset::of(c3, {0, 1});
  CHECK_FALSE(inverse(a3) == a3);
  CHECK(enumerate_right_subfactors(a3, EnumerationMode::bounded_search, false) ==
        enumerate_left_subfactors(a3, EnumerationMode::bounded_search));

  // left oracle agreement across a small sweep
  for (const char* s : {"S3", "D8"}) {
    FiniteGroup g = parse_group_spec(s);
    for (std::uint64_t am = 1; am <= g.full_mask(); am += 9) {
      Subset aa(g, am);
      CHECK(enumerate_left_subfactors(aa, EnumerationMode::bounded_search) ==
            left_family_oracle(g, aa));
    }
  }
}

TEST_CASE("factorization search") {
  FiniteGroup z6 = parse_group_spec("C6");
  auto p = find_factorization(z6, 2, 3);
  REQUIRE(p.has_value());
  CHECK(p->first.size() == 2);
  CHECK(p->second.size() == 3);
  CHECK(is_right_factor(p->first, p->second));

  auto trivial = find_factorization(z6, 1, 6);
  REQUIRE(trivial.has_value());
  CHECK(is_right_factor(trivial->first, trivial->second));

  FiniteGroup s3 = parse_group_spec("S3");
  auto ps = find_factorization(s3, 2, 3);
  REQUIRE(ps.has_value());
  CHECK(is_right_factor(ps->first, ps->second));

  // A4 has no subgroup of order 6, so (6,2) exercises the cover search
  FiniteGroup a4 = parse_group_spec("A4");
  auto pa = find_factorization(a4, 6, 2);
  REQUIRE(pa.has_value());
  CHECK(pa->first.size() == 6);
  CHECK(pa->second.size() == 2);
  CHECK(is_right_factor(pa->first, pa->second));

  CHECK_THROWS_AS(find_factorization(z6, 4, 3), SizeMismatchError);
}

TEST_CASE("budget is enforced") {
  FiniteGroup g = parse_group_spec("C2^4");
  Subset a = Subset::of(g, {0, 1});
  SearchOptions tiny;
  tiny.node_budget = 10;
  CHECK_THROWS_AS(enumerate_right_subfactors(a, EnumerationMode::brute_force, false, tiny),
                  BudgetExceededError);
}

TEST_CASE("random seeds reach differing sub-factor sizes in C7xC7") {
  FiniteGroup g = parse_group_spec("C7xC7");
  Subset a = parse_subset(g, "00,01,10");
  std::set<int> sizes;
  for (std::uint64_t seed = 0; seed < 400 && (!sizes.count(10) || !sizes.count(13)); ++seed) {
    auto [b, trace] = greedy_right_subfactor(a, 0, Chooser::seeded_random, seed);
    CHECK(is_right_subfactor(a, b));
    sizes.insert(b.size());
  }
  CHECK(sizes.count(10));
  CHECK(sizes.count(13));
}

TEST_CASE("family json") {
  FiniteGroup z6 = parse_group_spec("C6");
  Subset a = Subset::of(z6, {0, 1});
  SubsetFamily fam = enumerate_right_subfactors(a, EnumerationMode::bounded_search, false);
  std::string j = family_to_json(a, fam, EnumerationMode::bounded_search, false);
  CHECK(j.find("\"group\":\"C6\"") != std::string::npos);
  CHECK(j.find("\"mode\":\"bounded_search\"") != std::string::npos);
  CHECK(j.find("[0,2,4]") != std::string::npos);
}
