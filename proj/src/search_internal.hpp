#pragma once

// Shared bitmask search machinery for the sub-factor and sub-index engines.
// A right sub-factor related to A is exactly a covering clique of the
// compatibility relation  x ~ y  <=>  x*y^-1 not in Dif_l(A)\{1}:
// cliques are the direct sets, and Dif_l(A)*B = G is the maximality test.

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "subf/errors.hpp"
#include "subf/group.hpp"

namespace subf::detail {

struct Budget {
  std::uint64_t cap;
  std::uint64_t used = 0;

  explicit Budget(std::uint64_t cap_) : cap(cap_) {}
  void charge() {
    if (++used > cap)
      throw BudgetExceededError("search budget of " + std::to_string(cap) +
                                " nodes exceeded; results discarded");
  }
};

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

/// Precomputed facts about one pair (G, A) needed by every right-side search.
struct RightSearchCtx {
  const FiniteGroup* g = nullptr;
  int n = 0;
  std::uint64_t full = 0;
  std::uint64_t dif = 0;  // Dif_l(A)
  int dif_size = 0;
  std::uint64_t c1 = 0;  // (G \ Dif_l(A)) | {1}
  int lb = 0, ub = 0;    // size bounds for members of SubF^1_r(A)
  std::array<std::uint64_t, 64> dif_times{};  // Dif_l(A) * g
  std::array<std::uint64_t, 64> adj{};        // elements compatible with g

  RightSearchCtx(const FiniteGroup& gr, std::uint64_t a_mask) {
    g = &gr;
    n = gr.order();
    full = gr.full_mask();
    int a_size = std::popcount(a_mask);

    std::uint64_t inv = gr.invert_mask(a_mask);
    std::uint64_t d = 0;
    std::uint64_t xs = inv;
    while (xs) {
      int x = std::countr_zero(xs);
      xs &= xs - 1;
      d |= gr.translate_mask(a_mask, x, /*left=*/true);
    }
    dif = d;
    dif_size = std::popcount(d);
    c1 = (full & ~d) | 1;
    ub = n / a_size;
    lb = ceil_div(n, dif_size);
    for (int e = 0; e < n; ++e) {
      dif_times[e] = gr.translate_mask(d, e, /*left=*/false);
      adj[e] = (~dif_times[e] & full) | (std::uint64_t{1} << e);
    }
  }
};

/// First covering clique of exact size s containing the identity, in
/// lexicographic mask order; 0 if none exists.
std::uint64_t find_covering_clique(const RightSearchCtx& c, int s, Budget& budget);

/// All covering cliques containing the identity, i.e. SubF^1_r(A).
std::vector<std::uint64_t> collect_covering_cliques(const RightSearchCtx& c, Budget& budget);

struct IndexPair {
  int lower = 0, upper = 0;
  std::uint64_t witness_min = 0, witness_max = 0;
};

IndexPair right_index_pair(const RightSearchCtx& ctx, Budget& budget, bool need_lower);

struct StabilityProbe {
  bool right_stable = false;
  bool two_sided_stable = false;
  int right_index = 0;  // meaningful when right_stable
};

/// Minimal-work stability evaluation used by the sweep loops: bound
/// short-circuits first, searches only when a side stays undecided.
StabilityProbe probe_stability(const FiniteGroup& g, std::uint64_t a_mask, bool need_two_sided,
                               Budget& budget);

}  // namespace subf::detail
