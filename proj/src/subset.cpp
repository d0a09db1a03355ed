#include "subf/subset.hpp"

#include <algorithm>
#include <bit>

namespace subf {

namespace {

void require_same_group(const Subset& a, const Subset& b) {
  if (&a.group() != &b.group())
    throw GroupMismatchError("subsets are bound to different groups");
}

}  // namespace

Subset Subset::of(const FiniteGroup& g, std::initializer_list<ElementId> ids) {
  std::uint64_t m = 0;
  for (ElementId e : ids) m |= std::uint64_t{1} << e;
  return Subset(g, m);
}

Subset Subset::of(const FiniteGroup& g, const std::vector<ElementId>& ids) {
  std::uint64_t m = 0;
  for (ElementId e : ids) m |= std::uint64_t{1} << e;
  return Subset(g, m);
}

int Subset::size() const { return std::popcount(mask_); }

std::vector<ElementId> Subset::elements() const {
  std::vector<ElementId> out;
  out.reserve(static_cast<std::size_t>(size()));
  std::uint64_t m = mask_;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

std::string Subset::to_string() const {
  std::string out = "{";
  bool first = true;
  for (ElementId e : elements()) {
    if (!first) out += ",";
    out += group_->name(e);
    first = false;
  }
  return out + "}";
}

Subset difference_set(const Subset& a, Side side) {
  const FiniteGroup& g = a.group();
  std::uint64_t out = 0;
  std::uint64_t lhs = side == Side::left ? g.invert_mask(a.mask()) : a.mask();
  std::uint64_t rhs = side == Side::left ? a.mask() : g.invert_mask(a.mask());
  std::uint64_t xs = lhs;
  while (xs) {
    int x = std::countr_zero(xs);
    xs &= xs - 1;
    out |= g.translate_mask(rhs, x, /*left=*/true);
  }
  return Subset(g, out);
}

Subset left_complement(const Subset& a) {
  return Subset(a.group(), a.group().full_mask() & ~difference_set(a, Side::left).mask());
}

Subset product(const Subset& a, const Subset& b) {
  require_same_group(a, b);
  const FiniteGroup& g = a.group();
  std::uint64_t out = 0;
  std::uint64_t xs = a.mask();
  while (xs) {
    int x = std::countr_zero(xs);
    xs &= xs - 1;
    out |= g.translate_mask(b.mask(), x, /*left=*/true);
  }
  return Subset(g, out);
}

Subset inverse(const Subset& a) { return Subset(a.group(), a.group().invert_mask(a.mask())); }

Subset translate(const Subset& a, ElementId g, Side side) {
  return Subset(a.group(), a.group().translate_mask(a.mask(), g, side == Side::left));
}

bool is_direct(const Subset& a, const Subset& b) {
  require_same_group(a, b);
  if (a.is_empty() || b.is_empty()) return true;
  std::uint64_t dl = difference_set(a, Side::left).mask();
  std::uint64_t dr = difference_set(b, Side::right).mask();
  return (dl & dr) == 1;
}

int partition_class(const Subset& a) {
  if (a.is_empty()) throw EmptySubsetError("partition_class requires a non-empty subset");
  return a.group().order() / a.size();
}

SubsetFamily::SubsetFamily(const FiniteGroup& g, std::vector<std::uint64_t> masks) {
  std::sort(masks.begin(), masks.end(), [](std::uint64_t x, std::uint64_t y) {
    int px = std::popcount(x), py = std::popcount(y);
    return px != py ? px < py : x < y;
  });
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  members_.reserve(masks.size());
  for (std::uint64_t m : masks) members_.emplace_back(g, m);
}

bool SubsetFamily::contains(const Subset& s) const {
  return std::find(members_.begin(), members_.end(), s) != members_.end();
}

std::vector<std::uint64_t> SubsetFamily::masks() const {
  std::vector<std::uint64_t> out;
  out.reserve(members_.size());
  for (const auto& s : members_) out.push_back(s.mask());
  return out;
}

Subset parse_subset(const FiniteGroup& g, std::string_view text) {
  std::uint64_t mask = 0;
  std::size_t pos = 0;
  int depth = 0;
  std::string token;
  auto flush = [&] {
    auto b = token.find_first_not_of(" \t");
    if (b == std::string::npos) {
      token.clear();
      return;
    }
    auto e = token.find_last_not_of(" \t");
    std::string t = token.substr(b, e - b + 1);
    token.clear();
    auto id = g.element_by_name(t);
    if (!id) throw ParseError("unknown element '" + t + "' in group " + g.spec());
    mask |= std::uint64_t{1} << *id;
  };
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    token.push_back(c);
  }
  flush();
  return Subset(g, mask);
}

SubsetFamily all_subgroups(const FiniteGroup& g) {
  std::vector<std::uint64_t> found{1};  // trivial subgroup
  std::vector<std::uint64_t> frontier{1};
  auto known = [&](std::uint64_t m) {
    return std::find(found.begin(), found.end(), m) != found.end();
  };
  auto closure = [&](std::uint64_t seed) {
    std::uint64_t cur = seed;
    for (;;) {
      std::uint64_t next = cur;
      std::uint64_t xs = cur;
      while (xs) {
        int x = std::countr_zero(xs);
        xs &= xs - 1;
        next |= g.translate_mask(cur, x, /*left=*/true);
      }
      if (next == cur) return cur;
      cur = next;
    }
  };
  while (!frontier.empty()) {
    std::uint64_t h = frontier.back();
    frontier.pop_back();
    for (int e = 1; e < g.order(); ++e) {
      if ((h >> e) & 1) continue;
      std::uint64_t s = closure(h | (std::uint64_t{1} << e));
      if (!known(s)) {
        found.push_back(s);
        frontier.push_back(s);
      }
    }
  }
  return SubsetFamily(g, std::move(found));
}

FiniteGroup subgroup_as_group(const FiniteGroup& g, std::uint64_t subgroup_mask,
                              std::vector<ElementId>* to_parent) {
  Subset h(g, subgroup_mask);
  auto elems = h.elements();
  if (elems.empty() || elems[0] != 0)
    throw Error("subgroup mask must contain the identity");
  int n = static_cast<int>(elems.size());
  std::vector<int> to_sub(g.order(), -1);
  for (int i = 0; i < n; ++i) to_sub[elems[i]] = i;
  std::vector<std::uint8_t> mul(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int p = g.mul(elems[i], elems[j]);
      if (to_sub[p] < 0) throw Error("mask is not closed under multiplication");
      mul[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(to_sub[p]);
    }
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = g.name(elems[i]);
  if (to_parent) *to_parent = elems;
  return FiniteGroup::from_table(n, std::move(mul), std::move(names),
                                 "sub(" + g.spec() + ")");
}

}  // namespace subf
