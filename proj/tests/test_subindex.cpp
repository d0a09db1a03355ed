#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "subf/group.hpp"
#include "subf/subfactor.hpp"
#include "subf/subindex.hpp"
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

// min/max member size over the definitional right (or left) family.
std::pair<int, int> oracle_extremes(const FiniteGroup& g, const Subset& a, bool left_side) {
  int lo = 1 << 20, hi = 0;
  for (std::uint64_t b = 1; b <= g.full_mask(); ++b) {
    bool dir = left_side ? direct_by_counting(g, b, a.mask())
                         : direct_by_counting(g, a.mask(), b);
    if (!dir) continue;
    bool maximal = true;
    for (int e = 0; e < g.order() && maximal; ++e) {
      if ((b >> e) & 1) continue;
      std::uint64_t ext = b | (std::uint64_t{1} << e);
      maximal = !(left_side ? direct_by_counting(g, ext, a.mask())
                            : direct_by_counting(g, a.mask(), ext));
    }
    if (maximal) {
      int sz = Subset(g, b).size();
      lo = std::min(lo, sz);
      hi = std::max(hi, sz);
    }
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("paper-backed report values") {
  FiniteGroup s3 = parse_group_spec("S3");
  auto rep = sub_index_report(parse_subset(s3, "(),(1,3,2)"));
  CHECK(rep.two_sided_stable);
  CHECK(rep.index == 2);

  // {0,1,3} differences cover Z6, so the index is 1: a half-size set with
  // index 1 (the brute-force oracle agrees; see the exhaustive case below)
  FiniteGroup z6 = parse_group_spec("C6");
  auto rep6 = sub_index_report(Subset::of(z6, {0, 1, 3}));
  CHECK(rep6.two_sided_stable);
  CHECK(rep6.index == 1);

  auto rep01 = sub_index_report(Subset::of(z6, {0, 1}));
  CHECK(rep01.lower_right == 2);
  CHECK(rep01.upper_right == 3);
  CHECK_FALSE(rep01.right_stable);
  CHECK(rep01.relatively_strong_unstable_right);

  FiniteGroup d10 = parse_group_spec("D10");
  auto repd = sub_index_report(parse_subset(d10, "1,a,b,a^4b"));
  CHECK(repd.two_sided_stable);
  CHECK(repd.index == 2);

  FiniteGroup c10 = parse_group_spec("C10");
  auto rep013 = sub_index_report(parse_subset(c10, "0,1,3"));
  CHECK(rep013.index == 2);
  // a perfect difference basis has index 1
  auto rep0245 = sub_index_report(parse_subset(c10, "0,2,4,5"));
  CHECK(rep0245.index == 1);
}

TEST_CASE("upper and lower index formulas for {0,1} in Z_n") {
  for (int n = 2; n <= 16; ++n) {
    FiniteGroup g = parse_group_spec("C" + std::to_string(n));
    Subset a = Subset::of(g, {0, 1});
    CHECK(upper_index(a, Side::right) == n / 2);
    CHECK(lower_index(a, Side::right) == (n + 2) / 3);
  }
  FiniteGroup g = parse_group_spec("C6");
  CHECK(upper_index(Subset::full(g), Side::right) == 1);
  CHECK(lower_index(Subset::full(g), Side::right) == 1);
  CHECK_THROWS_AS(upper_index(Subset::empty(g), Side::right), EmptySubsetError);
}

TEST_CASE("subgroups are index stable with index |G|/|H|") {
  for (const char* s : {"C6", "S3", "D8", "Q8", "C12", "A4", "D12"}) {
    FiniteGroup g = parse_group_spec(s);
    SubsetFamily subs = all_subgroups(g);
    for (const Subset& h : subs.members()) {
      auto rep = sub_index_report(h);
      CHECK(rep.two_sided_stable);
      CHECK(rep.index == g.order() / h.size());
    }
  }
}

TEST_CASE("engine matches the definitional oracle, order <= 8") {
  for (const char* s : {"C5", "C6", "S3", "C8", "D8", "Q8", "C2^3", "C4xC2"}) {
    FiniteGroup g = parse_group_spec(s);
    for (std::uint64_t am = 1; am <= g.full_mask(); am += 2) {
      Subset a(g, am);
      auto [rlo, rhi] = oracle_extremes(g, a, /*left_side=*/false);
      auto [llo, lhi] = oracle_extremes(g, a, /*left_side=*/true);
      auto rep = sub_index_report(a);
      CHECK(rep.lower_right == rlo);
      CHECK(rep.upper_right == rhi);
      CHECK(rep.lower_left == llo);
      CHECK(rep.upper_left == lhi);
    }
  }
}

TEST_CASE("bound chain and flags, order <= 12") {
  for (const char* s : {"C6", "S3", "C8", "D8", "Q8", "C2^3", "C7", "C9", "C3xC3", "D10",
                        "C10", "C11", "Dic3", "C12", "A4", "D12", "C6xC2"}) {
    FiniteGroup g = parse_group_spec(s);
    int n = g.order();
    for (std::uint64_t am = 1; am <= g.full_mask(); ++am) {
      Subset a(g, am);
      auto rep = sub_index_report(a);
      int asz = a.size();
      Subset dif = difference_set(a, Side::left);
      int dsz = dif.size();

      // |G|/(|A|^2-|A|+1) <= ceil(|G|/|Dif|) <= lower <= upper <= floor(|G|/|A|)
      //   <= (|Dif|/|A|) * lower
      CHECK(n <= (asz * asz - asz + 1) * rep.bound_lower);
      CHECK(rep.bound_lower == (n + dsz - 1) / dsz);
      CHECK(rep.bound_lower <= rep.lower_right);
      CHECK(rep.lower_right <= rep.upper_right);
      CHECK(rep.upper_right <= rep.bound_upper);
      CHECK(rep.bound_upper == n / asz);
      CHECK(rep.upper_right * asz <= dsz * rep.lower_right);
      CHECK(rep.upper_right <= rep.bound_eq25);
      CHECK(rep.bound_eq25 == n - dsz + 1);

      CHECK(rep.right_stable == (rep.lower_right == rep.upper_right));
      CHECK(rep.two_sided_stable ==
            (rep.right_stable && rep.left_stable && rep.upper_right == rep.upper_left));
      CHECK(rep.index.has_value() == rep.two_sided_stable);

      // membership in A_r caps every sub-index by r
      int r = rep.partition_class;
      CHECK(rep.upper_right <= r);
      CHECK(rep.upper_left <= r);

      // |A| > |G|/2 forces index 1
      if (2 * asz > n) {
        CHECK(rep.two_sided_stable);
        CHECK(rep.index == 1);
      }
      // index 1 forces |A| >= 1/2 + sqrt(|G| - 3/4)
      if (rep.index == 1 && n > 1) CHECK((2 * asz - 1) * (2 * asz - 1) >= 4 * n - 3);

      // witnesses realize the extremes
      Subset wrmax = Subset::of(g, rep.witness_right_max);
      Subset wrmin = Subset::of(g, rep.witness_right_min);
      CHECK(wrmax.size() == rep.upper_right);
      CHECK(wrmin.size() == rep.lower_right);
      CHECK(is_right_subfactor(a, wrmax));
      CHECK(is_right_subfactor(a, wrmin));
      Subset wlmax = Subset::of(g, rep.witness_left_max);
      CHECK(wlmax.size() == rep.upper_left);
      CHECK(is_right_subfactor(inverse(a), inverse(wlmax)));

      // kind-selector agrees with the report
      CHECK(is_index_stable_subset(a, StabilityKind::right) == rep.right_stable);
      CHECK(is_index_stable_subset(a, StabilityKind::left) == rep.left_stable);
      CHECK(is_index_stable_subset(a, StabilityKind::two_sided) == rep.two_sided_stable);
    }
  }
}

TEST_CASE("translation invariance of all four sub-indices, order <= 8") {
  for (const char* s : {"S3", "D8", "Q8"}) {
    FiniteGroup g = parse_group_spec(s);
    for (std::uint64_t am = 1; am <= g.full_mask(); am += 3) {
      Subset a(g, am);
      auto rep = sub_index_report(a);
      for (int e = 0; e < g.order(); ++e) {
        for (Side side : {Side::left, Side::right}) {
          auto rep2 = sub_index_report(translate(a, e, side));
          CHECK(rep2.lower_right == rep.lower_right);
          CHECK(rep2.upper_right == rep.upper_right);
          CHECK(rep2.lower_left == rep.lower_left);
          CHECK(rep2.upper_left == rep.upper_left);
        }
      }
    }
  }
}

TEST_CASE("multiplicativity over subgroups, order <= 8") {
  for (const char* s : {"C6", "S3", "C8", "D8", "Q8"}) {
    FiniteGroup g = parse_group_spec(s);
    SubsetFamily subs = all_subgroups(g);
    for (const Subset& h : subs.members()) {
      std::vector<ElementId> to_parent;
      FiniteGroup hg = subgroup_as_group(g, h.mask(), &to_parent);
      std::vector<int> to_sub(static_cast<std::size_t>(g.order()), -1);
      for (int i = 0; i < hg.order(); ++i) to_sub[to_parent[i]] = i;
      for (std::uint64_t am = 1; am <= hg.full_mask(); ++am) {
        Subset a_in_h(hg, am);
        std::uint64_t parent_mask = 0;
        for (ElementId e : a_in_h.elements())
          parent_mask |= std::uint64_t{1} << to_parent[e];
        Subset a_in_g(g, parent_mask);
        if (!is_index_stable_subset(a_in_g, StabilityKind::right)) continue;
        int big = lower_index(a_in_g, Side::right);
        int small = lower_index(a_in_h, Side::right);
        CHECK(is_index_stable_subset(a_in_h, StabilityKind::right));
        CHECK(big == (g.order() / hg.order()) * small);
      }
    }
  }
}

TEST_CASE("report json shape") {
  FiniteGroup z6 = parse_group_spec("C6");
  auto rep = sub_index_report(Subset::of(z6, {0, 1}));
  std::string j = report_to_json(rep);
  for (const char* key :
       {"upper_right", "lower_right", "upper_left", "lower_left", "bound_lower", "bound_upper",
        "bound_eq25", "right_stable", "left_stable", "two_sided_stable", "index",
        "partition_class", "relatively_strong_unstable_right", "witnesses"})
    CHECK(j.find(key) != std::string::npos);
  CHECK(j.find("\"index\":null") != std::string::npos);
}

TEST_CASE("report cache round trip") {
  std::string path = (std::filesystem::temp_directory_path() / "subf_cache_test.jsonl").string();
  std::remove(path.c_str());
  FiniteGroup z6 = parse_group_spec("C6");
  Subset a = Subset::of(z6, {0, 1});
  auto rep = sub_index_report(a);
  {
    ReportCache cache(path);
    CHECK_FALSE(cache.get(z6, a.mask()).has_value());
    cache.put(z6, a.mask(), rep);
    cache.put(z6, a.mask(), rep);  // write-once: second put is a no-op
    CHECK(cache.size() == 1);
  }
  {
    ReportCache cache(path);
    auto hit = cache.get(z6, a.mask());
    REQUIRE(hit.has_value());
    CHECK(report_to_json(*hit) == report_to_json(rep));
  }
  std::remove(path.c_str());

  // unrecognized format headers are rejected
  {
    std::ofstream out(path);
    out << "{\"format\":\"something-else\"}\n";
  }
  CHECK_THROWS_AS(ReportCache{path}, CatalogError);
  std::remove(path.c_str());
}
