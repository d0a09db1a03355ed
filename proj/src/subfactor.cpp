#include "subf/subfactor.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "search_internal.hpp"

namespace subf {

namespace detail {

std::uint64_t find_covering_clique(const RightSearchCtx& c, int s, Budget& budget) {
  std::uint64_t found = 0;
  auto rec = [&](auto&& self, int last, int cnt, std::uint64_t chosen, std::uint64_t allowed,
                 std::uint64_t covered) -> bool {
    budget.charge();
    if (cnt == s) {
      if (covered == c.full) {
        found = chosen;
        return true;
      }
      return false;
    }
    int need = s - cnt;
    if (std::popcount(covered) + need * c.dif_size < c.n) return false;
    std::uint64_t cand =
        last + 1 >= 64 ? 0 : allowed & ~((std::uint64_t{2} << last) - 1);
    if (std::popcount(cand) < need) return false;
    while (cand) {
      int e = std::countr_zero(cand);
      cand &= cand - 1;
      if (self(self, e, cnt + 1, chosen | (std::uint64_t{1} << e), allowed & c.adj[e],
               covered | c.dif_times[e]))
        return true;
    }
    return false;
  };
  if (s < 1) return 0;
  rec(rec, 0, 1, 1, c.c1 & c.adj[0] & ~std::uint64_t{1}, c.dif_times[0]);
  return found;
}

std::vector<std::uint64_t> collect_covering_cliques(const RightSearchCtx& c, Budget& budget) {
  std::vector<std::uint64_t> out;
  auto rec = [&](auto&& self, int last, std::uint64_t chosen, std::uint64_t allowed,
                 std::uint64_t covered) -> void {
    budget.charge();
    if (covered == c.full) {
      out.push_back(chosen);  // covering <=> no further direct extension
      return;
    }
    std::uint64_t cand =
        last + 1 >= 64 ? 0 : allowed & ~((std::uint64_t{2} << last) - 1);
    while (cand) {
      int e = std::countr_zero(cand);
      cand &= cand - 1;
      self(self, e, chosen | (std::uint64_t{1} << e), allowed & c.adj[e],
           covered | c.dif_times[e]);
    }
  };
  rec(rec, 0, 1, c.c1 & c.adj[0] & ~std::uint64_t{1}, c.dif_times[0]);
  return out;
}

}  // namespace detail

namespace {

void require_nonempty(const Subset& a, const char* op) {
  if (a.is_empty()) throw EmptySubsetError(std::string(op) + " requires a non-empty subset");
}

void require_same_group(const Subset& a, const Subset& b) {
  if (&a.group() != &b.group())
    throw GroupMismatchError("subsets are bound to different groups");
}

// Unique-representation test by counting products, independent of the
// difference-set criterion. The definitional oracle.
bool direct_by_counting(const FiniteGroup& g, std::uint64_t a_mask, std::uint64_t b_mask) {
  std::uint64_t seen = 0;
  std::uint64_t xs = a_mask;
  while (xs) {
    int x = std::countr_zero(xs);
    xs &= xs - 1;
    std::uint64_t t = g.translate_mask(b_mask, x, /*left=*/true);
    if (t & seen) return false;
    seen |= t;
  }
  return true;
}

std::vector<std::uint64_t> brute_force_family(const FiniteGroup& g, std::uint64_t a_mask,
                                              detail::Budget& budget) {
  std::vector<std::uint64_t> out;
  std::uint64_t full = g.full_mask();
  for (std::uint64_t b = 1; b <= full; ++b) {
    budget.charge();
    if (!direct_by_counting(g, a_mask, b)) continue;
    bool maximal = true;
    std::uint64_t rest = full & ~b;
    while (rest) {
      int e = std::countr_zero(rest);
      rest &= rest - 1;
      if (direct_by_counting(g, a_mask, b | (std::uint64_t{1} << e))) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(b);
  }
  return out;
}

// Exhausts every choice sequence of the greedy construction over all seeds.
// States are memoized on the chosen set: the candidate state is the
// order-independent intersection of C_l(A)*b over chosen b.
std::vector<std::uint64_t> branching_family(const FiniteGroup& g, std::uint64_t a_mask,
                                            detail::Budget& budget) {
  detail::RightSearchCtx ctx(g, a_mask);
  std::uint64_t cl = ctx.c1 & ~std::uint64_t{1};  // C_l(A)
  std::vector<std::uint64_t> out;
  std::unordered_set<std::uint64_t> visited;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> stack;  // (B, state)
  for (int seed = 0; seed < g.order(); ++seed) {
    std::uint64_t b = std::uint64_t{1} << seed;
    stack.emplace_back(b, g.translate_mask(cl, seed, /*left=*/false));
  }
  while (!stack.empty()) {
    auto [b, state] = stack.back();
    stack.pop_back();
    budget.charge();
    if (!visited.insert(b).second) continue;
    if (state == 0) {
      out.push_back(b);
      continue;
    }
    std::uint64_t cand = state;
    while (cand) {
      int e = std::countr_zero(cand);
      cand &= cand - 1;
      stack.emplace_back(b | (std::uint64_t{1} << e),
                         state & g.translate_mask(cl, e, /*left=*/false));
    }
  }
  return out;
}

std::vector<std::uint64_t> all_right_translates(const FiniteGroup& g,
                                                const std::vector<std::uint64_t>& masks) {
  std::vector<std::uint64_t> out;
  out.reserve(masks.size() * g.order());
  for (std::uint64_t m : masks)
    for (int e = 0; e < g.order(); ++e) out.push_back(g.translate_mask(m, e, /*left=*/false));
  return out;
}

}  // namespace

bool is_right_subfactor(const Subset& a, const Subset& b, Criterion criterion) {
  require_same_group(a, b);
  require_nonempty(a, "is_right_subfactor");
  require_nonempty(b, "is_right_subfactor");
  const FiniteGroup& g = a.group();
  std::uint64_t dl = difference_set(a, Side::left).mask();

  if (criterion == Criterion::eq21) {
    std::uint64_t dr = difference_set(b, Side::right).mask();
    if ((dl & dr) != 1) return false;
    std::uint64_t covered = 0;
    for (ElementId e : b.elements()) covered |= g.translate_mask(dl, e, /*left=*/false);
    return covered == g.full_mask();
  }

  // eq23: every b lies in the intersection of C_l(A)*beta over the other
  // members, and the full intersection is empty.
  std::uint64_t cl = g.full_mask() & ~dl;
  auto elems = b.elements();
  std::vector<std::uint64_t> cl_beta(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i)
    cl_beta[i] = g.translate_mask(cl, elems[i], /*left=*/false);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      if (i == j) continue;
      if (!((cl_beta[j] >> elems[i]) & 1)) return false;
    }
  }
  std::uint64_t common = g.full_mask();
  for (std::uint64_t m : cl_beta) common &= m;
  return common == 0;
}

bool is_right_factor(const Subset& a, const Subset& b) {
  require_same_group(a, b);
  const FiniteGroup& g = a.group();
  if (static_cast<long long>(a.size()) * b.size() != g.order()) return false;
  if (!is_direct(a, b)) return false;
  return product(a, b).mask() == g.full_mask();
}

std::pair<Subset, AlgorithmTrace> greedy_right_subfactor(const Subset& a, ElementId g0,
                                                         Chooser chooser, std::uint64_t seed) {
  require_nonempty(a, "greedy_right_subfactor");
  const FiniteGroup& g = a.group();
  std::uint64_t cl = left_complement(a).mask();

  AlgorithmTrace trace;
  trace.seed = g0;
  std::mt19937_64 rng(seed);

  std::uint64_t chosen = std::uint64_t{1} << g0;
  std::uint64_t state = g.translate_mask(cl, g0, /*left=*/false);  // C^(0)
  trace.states.emplace_back(g, state);
  while (state != 0) {
    int pick;
    if (chooser == Chooser::deterministic_min) {
      pick = std::countr_zero(state);
    } else {
      int count = std::popcount(state);
      int skip = static_cast<int>(rng() % static_cast<std::uint64_t>(count));
      std::uint64_t m = state;
      while (skip--) m &= m - 1;
      pick = std::countr_zero(m);
    }
    trace.chosen.push_back(pick);
    chosen |= std::uint64_t{1} << pick;
    state &= g.translate_mask(cl, pick, /*left=*/false);
    trace.states.emplace_back(g, state);
  }
  return {Subset(g, chosen), std::move(trace)};
}

SubsetFamily enumerate_right_subfactors(const Subset& a, EnumerationMode mode, bool normalized,
                                        const SearchOptions& opts) {
  require_nonempty(a, "enumerate_right_subfactors");
  const FiniteGroup& g = a.group();
  detail::Budget budget(opts.node_budget);

  std::vector<std::uint64_t> masks;
  switch (mode) {
    case EnumerationMode::bounded_search: {
      detail::RightSearchCtx ctx(g, a.mask());
      masks = detail::collect_covering_cliques(ctx, budget);  // SubF^1
      if (!normalized) masks = all_right_translates(g, masks);
      break;
    }
    case EnumerationMode::algorithm_branching: {
      masks = branching_family(g, a.mask(), budget);  // full SubF
      break;
    }
    case EnumerationMode::brute_force: {
      masks = brute_force_family(g, a.mask(), budget);  // full SubF
      break;
    }
  }
  if (normalized && mode != EnumerationMode::bounded_search) {
    std::erase_if(masks, [](std::uint64_t m) { return (m & 1) == 0; });
  }
  return SubsetFamily(g, std::move(masks));
}

SubsetFamily enumerate_left_subfactors(const Subset& a, EnumerationMode mode,
                                       const SearchOptions& opts) {
  require_nonempty(a, "enumerate_left_subfactors");
  const FiniteGroup& g = a.group();
  SubsetFamily right = enumerate_right_subfactors(inverse(a), mode, /*normalized=*/false, opts);
  std::vector<std::uint64_t> masks;
  masks.reserve(right.size());
  for (const Subset& s : right.members()) masks.push_back(g.invert_mask(s.mask()));
  return SubsetFamily(g, std::move(masks));
}

std::optional<std::pair<Subset, Subset>> find_factorization(const FiniteGroup& g, int a, int b,
                                                            const SearchOptions& opts) {
  if (a < 1 || b < 1 || static_cast<long long>(a) * b != g.order())
    throw SizeMismatchError("sizes " + std::to_string(a) + "*" + std::to_string(b) +
                            " do not multiply to the group order " + std::to_string(g.order()));
  detail::Budget budget(opts.node_budget);
  std::uint64_t full = g.full_mask();

  // Subgroup fast path: a subgroup of order a (or b) factors G with a
  // transversal of its cosets.
  auto transversal = [&](std::uint64_t h_mask, bool right_cosets) {
    std::uint64_t rest = full, picks = 0;
    while (rest) {
      int e = std::countr_zero(rest);
      picks |= std::uint64_t{1} << e;
      rest &= ~g.translate_mask(h_mask, e, /*left=*/!right_cosets);
    }
    return picks;
  };
  SubsetFamily subgroups = all_subgroups(g);
  for (const Subset& h : subgroups.members()) {
    if (h.size() == a) {
      std::uint64_t t = transversal(h.mask(), /*right_cosets=*/true);
      return std::make_pair(Subset(g, h.mask()), Subset(g, t));
    }
    if (h.size() == b) {
      std::uint64_t t = transversal(h.mask(), /*right_cosets=*/false);
      return std::make_pair(Subset(g, t), Subset(g, h.mask()));
    }
  }

  // Backtracking: normalize both sides to contain the identity, then cover G
  // by disjoint right translates A*b of each candidate A.
  std::optional<std::pair<Subset, Subset>> found;
  std::array<std::uint64_t, 64 + 1> a_translate{};  // A * e, refreshed per candidate

  auto cover = [&](auto&& self, std::uint64_t a_mask, std::uint64_t b_mask,
                   std::uint64_t covered) -> bool {
    budget.charge();
    if (covered == full) {
      found = std::make_pair(Subset(g, a_mask), Subset(g, b_mask));
      return true;
    }
    int x = std::countr_zero(~covered & full);
    // candidates e with x in A*e, i.e. e in A^-1 * x
    std::uint64_t cand = g.translate_mask(g.invert_mask(a_mask), x, /*left=*/false);
    while (cand) {
      int e = std::countr_zero(cand);
      cand &= cand - 1;
      std::uint64_t t = a_translate[e];
      if (t & covered) continue;
      if (self(self, a_mask, b_mask | (std::uint64_t{1} << e), covered | t)) return true;
    }
    return false;
  };

  auto pick_a = [&](auto&& self, int last, int cnt, std::uint64_t a_mask) -> bool {
    budget.charge();
    if (cnt == a) {
      for (int e = 0; e < g.order(); ++e) a_translate[e] = g.translate_mask(a_mask, e, false);
      return cover(cover, a_mask, 1, a_mask);
    }
    for (int e = last + 1; e < g.order(); ++e)
      if (self(self, e, cnt + 1, a_mask | (std::uint64_t{1} << e))) return true;
    return false;
  };

  pick_a(pick_a, 0, 1, 1);
  return found;
}

std::string family_to_json(const Subset& a, const SubsetFamily& family, EnumerationMode mode,
                           bool normalized) {
  nlohmann::json j;
  j["group"] = a.group().spec();
  j["A"] = a.elements();
  auto members = nlohmann::json::array();
  for (const Subset& s : family.members()) members.push_back(s.elements());
  j["members"] = std::move(members);
  switch (mode) {
    case EnumerationMode::bounded_search: j["mode"] = "bounded_search"; break;
    case EnumerationMode::algorithm_branching: j["mode"] = "algorithm_branching"; break;
    case EnumerationMode::brute_force: j["mode"] = "brute_force"; break;
  }
  j["normalized"] = normalized;
  return j.dump();
}

}  // namespace subf
