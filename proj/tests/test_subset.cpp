#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "subf/group.hpp"
#include "subf/subset.hpp"

using namespace subf;

namespace {

// Groups of order <= 8 for exhaustive property sweeps.
std::vector<FiniteGroup> small_groups() {
  std::vector<FiniteGroup> out;
  for (const char* s : {"C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7", "C8", "C4xC2",
                        "D8", "Q8", "C2^3"})
    out.push_back(parse_group_spec(s));
  return out;
}

// Definitional directness: count representations.
bool direct_by_counting(const FiniteGroup& g, const Subset& a, const Subset& b) {
  std::vector<int> hits(static_cast<std::size_t>(g.order()), 0);
  for (ElementId x : a.elements())
    for (ElementId y : b.elements())
      if (++hits[g.mul(x, y)] > 1) return false;
  return true;
}

}  // namespace

TEST_CASE("difference sets") {
  FiniteGroup z6 = parse_group_spec("C6");
  Subset a = Subset::of(z6, {0, 1});
  CHECK(difference_set(a, Side::left) == Subset::of(z6, {0, 1, 5}));
  CHECK(difference_set(a, Side::right) == Subset::of(z6, {0, 1, 5}));

  // a subgroup is closed: Dif equals the subgroup itself
  FiniteGroup s3 = parse_group_spec("S3");
  Subset h = parse_subset(s3, "(),(1,2)");
  CHECK(difference_set(h, Side::left) == h);

  // weight <= 1 vectors in C2^5 difference out to weight <= 2
  FiniteGroup g32 = parse_group_spec("C2^5");
  Subset w1 = parse_subset(g32, "00000,10000,01000,00100,00010,00001");
  Subset d = difference_set(w1, Side::left);
  CHECK(d.size() == 16);
  for (ElementId e : d.elements()) CHECK(std::popcount(static_cast<unsigned>(e)) <= 2);
}

TEST_CASE("left complement") {
  FiniteGroup z6 = parse_group_spec("C6");
  CHECK(left_complement(Subset::of(z6, {0, 1})) == Subset::of(z6, {2, 3, 4}));
  CHECK(left_complement(Subset::of(z6, {0, 1, 2, 3})) == Subset::empty(z6));
  CHECK(left_complement(Subset::empty(z6)) == Subset::full(z6));
}

TEST_CASE("directness") {
  FiniteGroup z5 = parse_group_spec("C5");
  CHECK(is_direct(Subset::of(z5, {0, 1}), Subset::of(z5, {2, 4})));
  FiniteGroup z6 = parse_group_spec("C6");
  CHECK(is_direct(Subset::of(z6, {0, 1}), Subset::of(z6, {3})));
  CHECK_FALSE(is_direct(Subset::of(z6, {0, 1}), Subset::of(z6, {0, 1})));
  CHECK(is_direct(Subset::empty(z6), Subset::of(z6, {0, 1})));
  CHECK(is_direct(Subset::of(z6, {0, 1}), Subset::empty(z6)));

  FiniteGroup z5b = parse_group_spec("C5");
  CHECK_THROWS_AS(is_direct(Subset::of(z5, {0}), Subset::of(z5b, {0})), GroupMismatchError);
}

TEST_CASE("product, inverse, translate") {
  FiniteGroup z6 = parse_group_spec("C6");
  CHECK(product(Subset::of(z6, {0, 1}), Subset::of(z6, {0, 2, 4})) == Subset::full(z6));
  Subset sym = Subset::of(z6, {1, 5});
  CHECK(inverse(sym) == sym);
  Subset b = Subset::of(z6, {2, 3});
  // right-translating by an inverse member pulls the identity in
  Subset shifted = translate(b, z6.inv(2), Side::right);
  CHECK(shifted.contains(0));
  CHECK(shifted.size() == b.size());
  CHECK_THROWS_AS(product(Subset::of(z6, {0}), Subset::of(parse_group_spec("C6"), {0})),
                  GroupMismatchError);
}

TEST_CASE("partition class") {
  FiniteGroup z6 = parse_group_spec("C6");
  CHECK(partition_class(Subset::of(z6, {0, 1, 3})) == 2);
  CHECK(partition_class(Subset::full(z6)) == 1);
  FiniteGroup z12 = parse_group_spec("C12");
  CHECK(partition_class(Subset::of(z12, {0, 1, 6})) == 4);
  CHECK_THROWS_AS(partition_class(Subset::empty(z6)), EmptySubsetError);
}

TEST_CASE("families are canonical") {
  FiniteGroup z6 = parse_group_spec("C6");
  SubsetFamily fam(z6, {0b111, 0b11, 0b11, 0b101000, 0b1});
  REQUIRE(fam.size() == 4);
  CHECK(fam.members()[0].mask() == 0b1);
  CHECK(fam.members()[1].mask() == 0b11);
  CHECK(fam.members()[2].mask() == 0b101000);
  CHECK(fam.members()[3].mask() == 0b111);
}

TEST_CASE("subset parsing") {
  FiniteGroup d8 = parse_group_spec("D8");
  Subset a = parse_subset(d8, "a,a^2,b");
  CHECK(a.size() == 3);
  CHECK(a.to_string() == "{a,a^2,b}");
  FiniteGroup s3 = parse_group_spec("S3");
  Subset p = parse_subset(s3, "(),(1,3,2)");
  CHECK(p.size() == 2);
  CHECK(p.contains(0));
  CHECK_THROWS_AS(parse_subset(s3, "(),bogus"), ParseError);
  CHECK(parse_subset(s3, "").is_empty());
  // indices are accepted everywhere
  CHECK(parse_subset(d8, "0,4") == Subset::of(d8, {0, 4}));
}

TEST_CASE("exhaustive properties at order <= 8") {
  for (const FiniteGroup& g : small_groups()) {
    std::uint64_t full = g.full_mask();
    for (std::uint64_t m = 0; m <= full; ++m) {
      Subset a(g, m);
      Subset dl = difference_set(a, Side::left);
      Subset dr = difference_set(a, Side::right);

      // definition consistency
      CHECK(dl == product(inverse(a), a));
      CHECK(dr == product(a, inverse(a)));

      if (!a.is_empty()) {
        CHECK(dl.contains(0));
        CHECK(inverse(dl) == dl);  // symmetric
        // |A| > |G|/2 forces both difference sets to cover G
        if (2 * a.size() > g.order()) {
          CHECK(dl == Subset::full(g));
          CHECK(dr == Subset::full(g));
        }
        int r = partition_class(a);
        CHECK(r * a.size() <= g.order());
        CHECK((r + 1) * a.size() > g.order());
      }

      // translation invariance of the left difference set
      for (int e = 0; e < g.order(); ++e)
        CHECK(difference_set(translate(a, e, Side::left), Side::left) == dl);

      // mask criterion agrees with representation counting
      for (std::uint64_t bm = 0; bm <= full; bm += 3) {  // strided to keep runtime sane
        Subset b(g, bm);
        CHECK(is_direct(a, b) == direct_by_counting(g, a, b));
      }
    }
  }
}
