#include "subf/survey.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "search_internal.hpp"

namespace subf {

namespace {

void atomic_min(std::atomic<std::uint64_t>& a, std::uint64_t v) {
  std::uint64_t cur = a.load(std::memory_order_relaxed);
  while (v < cur && !a.compare_exchange_weak(cur, v)) {
  }
}

template <class Fn>
void run_workers(int count, Fn&& fn) {
  if (count <= 1) {
    fn(0);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex err_mu;
  threads.reserve(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w)
    threads.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Next mask with the same popcount (Gosper).
std::uint64_t next_combination(std::uint64_t v) {
  std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

std::uint64_t combinations_count(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

KStabilityCell k_index_stability(const FiniteGroup& g, int k, const SearchOptions& opts) {
  if (k < 1) throw Error("k must be at least 1");
  KStabilityCell cell;
  cell.k = k;
  int n = g.order();
  // k = 1 and k > n/2 subsets are index stable without search; k > n by
  // convention.
  if (k == 1 || k > n / 2) return cell;

  if (combinations_count(n - 1, k - 1, opts.node_budget) > opts.node_budget)
    throw BudgetExceededError("size-" + std::to_string(k) + " sweep over order " +
                              std::to_string(n) + " exceeds the node budget");

  std::atomic<std::uint64_t> first_right{~std::uint64_t{0}};
  std::atomic<std::uint64_t> first_two_sided{~std::uint64_t{0}};
  int workers = std::max(1, opts.workers);

  run_workers(workers, [&](int w) {
    std::uint64_t stop = std::uint64_t{1} << (n - 1);
    std::uint64_t m = (std::uint64_t{1} << (k - 1)) - 1;
    for (std::uint64_t i = 0; m < stop; m = next_combination(m), ++i) {
      if (static_cast<int>(i % static_cast<std::uint64_t>(workers)) != w) continue;
      std::uint64_t a_mask = (m << 1) | 1;
      if (a_mask > first_right.load(std::memory_order_relaxed)) break;

      detail::Budget budget(opts.node_budget);
      detail::RightSearchCtx right(g, a_mask);
      bool right_ok;
      int right_index = 0;
      if (right.lb == right.ub) {
        right_ok = true;
        right_index = right.ub;
      } else {
        auto p = detail::right_index_pair(right, budget, /*need_lower=*/true);
        right_ok = p.lower == p.upper;
        right_index = p.upper;
      }
      if (!right_ok) {
        atomic_min(first_right, a_mask);
        continue;
      }
      if (a_mask > first_two_sided.load(std::memory_order_relaxed)) continue;

      detail::RightSearchCtx left(g, g.invert_mask(a_mask));
      bool two_ok;
      if (left.lb == left.ub) {
        two_ok = left.ub == right_index;
      } else {
        auto p = detail::right_index_pair(left, budget, /*need_lower=*/true);
        two_ok = p.lower == p.upper && p.upper == right_index;
      }
      if (!two_ok) atomic_min(first_two_sided, a_mask);
    }
  });

  std::uint64_t fr = first_right.load();
  std::uint64_t ft = first_two_sided.load();
  if (fr != ~std::uint64_t{0}) {
    cell.right_stable = false;
    cell.two_sided_stable = false;
    cell.witness_mask = fr;
  } else if (ft != ~std::uint64_t{0}) {
    cell.two_sided_stable = false;
    cell.witness_mask = ft;
  }
  return cell;
}

namespace {

StabilityRow sweep_verdict(const FiniteGroup& g, const SearchOptions& opts, bool early_stop) {
  StabilityRow row;
  row.name = g.spec();
  row.order = g.order();
  row.index_stable = true;
  for (int k = 2; k <= g.order() / 2; ++k) {
    KStabilityCell cell = k_index_stability(g, k, opts);
    row.cells.push_back(cell);
    if (!cell.two_sided_stable && row.index_stable) {
      row.index_stable = false;
      row.witness_mask = cell.witness_mask;
      if (early_stop) break;
    }
  }
  return row;
}

struct VerdictStore {
  std::mutex mu;
  std::map<std::string, StabilityRow> memo;

  static VerdictStore& instance() {
    static VerdictStore store;
    return store;
  }
};

StabilityRow verdict_with_shortcuts(const FiniteGroup& g, const SearchOptions& opts) {
  auto& store = VerdictStore::instance();
  std::string key = g.table_key();
  {
    std::lock_guard<std::mutex> lock(store.mu);
    if (auto it = store.memo.find(key); it != store.memo.end()) {
      StabilityRow row = it->second;
      row.name = g.spec();
      return row;
    }
  }

  StabilityRow row;
  bool settled = false;
  // Groups of order < 6 are index stable; only larger proper subgroups can
  // witness instability.
  SubsetFamily subgroups = all_subgroups(g);
  for (const Subset& h : subgroups.members()) {
    if (h.size() < 6 || h.size() == g.order()) continue;
    std::vector<ElementId> to_parent;
    FiniteGroup hg = subgroup_as_group(g, h.mask(), &to_parent);
    StabilityRow sub = verdict_with_shortcuts(hg, opts);
    if (!sub.index_stable) {
      row.name = g.spec();
      row.order = g.order();
      row.index_stable = false;
      std::uint64_t witness = 0;
      std::uint64_t m = sub.witness_mask.value_or(0);
      while (m) {
        int b = std::countr_zero(m);
        m &= m - 1;
        witness |= std::uint64_t{1} << to_parent[b];
      }
      row.witness_mask = witness;
      row.witness_origin = "subgroup of order " + std::to_string(h.size());
      settled = true;
      break;
    }
  }
  if (!settled) row = sweep_verdict(g, opts, /*early_stop=*/true);

  {
    std::lock_guard<std::mutex> lock(store.mu);
    store.memo.emplace(key, row);
  }
  return row;
}

}  // namespace

StabilityRow group_stability_verdict(const FiniteGroup& g, bool shortcuts,
                                     const SearchOptions& opts) {
  if (!shortcuts) return sweep_verdict(g, opts, /*early_stop=*/true);
  return verdict_with_shortcuts(g, opts);
}

std::vector<StabilityRow> stability_table(const std::vector<const FiniteGroup*>& groups,
                                          const SearchOptions& opts) {
  std::vector<StabilityRow> rows;
  rows.reserve(groups.size());
  for (const FiniteGroup* g : groups) {
    StabilityRow row = sweep_verdict(*g, opts, /*early_stop=*/false);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string cell_code(const KStabilityCell& c) {
  return std::string(c.right_stable ? "1" : "0") + "-" + (c.two_sided_stable ? "1" : "0");
}

int max_k(const std::vector<StabilityRow>& rows) {
  int k = 1;
  for (const auto& r : rows) k = std::max(k, r.order / 2);
  return k;
}

}  // namespace

std::string table_to_text(const std::vector<StabilityRow>& rows) {
  std::ostringstream out;
  int kmax = max_k(rows);
  std::size_t name_w = 5;
  for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
  out << std::string(name_w, ' ') << " ";
  for (int k = 2; k <= kmax; ++k) out << " k=" << k << (k < 10 ? " " : "");
  out << "  verdict\n";
  for (const auto& r : rows) {
    out << r.name << std::string(name_w - r.name.size(), ' ') << " ";
    for (int k = 2; k <= kmax; ++k) {
      if (k - 2 < static_cast<int>(r.cells.size()))
        out << " " << cell_code(r.cells[k - 2]) << " ";
      else
        out << "     ";
    }
    out << "  " << (r.index_stable ? "IndexStable" : "NotIndexStable") << "\n";
  }
  return out.str();
}

std::string table_to_markdown(const std::vector<StabilityRow>& rows) {
  std::ostringstream out;
  int kmax = max_k(rows);
  out << "| Group |";
  for (int k = 2; k <= kmax; ++k) out << " k=" << k << " |";
  out << " (right) index stability |\n|---|";
  for (int k = 2; k <= kmax; ++k) out << "---|";
  out << "---|\n";
  for (const auto& r : rows) {
    out << "| " << r.name << " |";
    for (int k = 2; k <= kmax; ++k) {
      if (k - 2 < static_cast<int>(r.cells.size()))
        out << " " << cell_code(r.cells[k - 2]) << " |";
      else
        out << " |";
    }
    out << (r.index_stable ? " Index Stable |" : " None (right) index stable |") << "\n";
  }
  return out.str();
}

std::string table_to_json(const std::vector<StabilityRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["name"] = r.name;
    row["order"] = r.order;
    if (r.group_id > 0) row["id"] = r.group_id;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells) {
      nlohmann::json jc;
      jc["k"] = c.k;
      jc["right_stable"] = c.right_stable;
      jc["two_sided_stable"] = c.two_sided_stable;
      jc["code"] = cell_code(c);
      if (c.witness_mask) {
        std::vector<int> idx;
        std::uint64_t m = *c.witness_mask;
        while (m) {
          idx.push_back(std::countr_zero(m));
          m &= m - 1;
        }
        jc["witness"] = idx;
      } else {
        jc["witness"] = nullptr;
      }
      cells.push_back(std::move(jc));
    }
    row["cells"] = std::move(cells);
    row["index_stable"] = r.index_stable;
    arr.push_back(std::move(row));
  }
  return arr.dump(2);
}

CharacterizationReport verify_characterization(const Catalog& catalog, int max_order,
                                               const SearchOptions& opts) {
  if (max_order < 1 || max_order > 16)
    throw CatalogError("verify_characterization supports max_order in [1,16]");
  catalog.require_complete(max_order);

  // The known index stable groups, as (order, id) pairs.
  static const std::set<std::pair<int, int>> kStable = {
      {1, 1}, {2, 1}, {3, 1}, {4, 1}, {4, 2},  {5, 1},  {6, 1},
      {7, 1}, {8, 2}, {8, 3}, {8, 4}, {8, 5},  {9, 2},  {16, 14}};

  CharacterizationReport report;
  bool match = true;
  for (const CatalogEntry* e : catalog.up_to_order(max_order)) {
    StabilityRow row = group_stability_verdict(*e->group, /*shortcuts=*/true, opts);
    bool expected = kStable.contains({e->order, e->id});
    report.groups.push_back(
        {e->name, e->order, e->id, row.index_stable, row.witness_mask, row.witness_origin});
    if (row.index_stable != expected) match = false;
    if (!row.index_stable && !row.witness_mask.has_value()) match = false;
  }
  report.stable_set_matches = match;

  {
    FiniteGroup g32 = parse_group_spec("C2^5");
    Subset a = parse_subset(g32, "00000,10000,01000,00100,00010,00001");
    Subset b1 = parse_subset(g32, "00000,11100,00111,11011");
    Subset b2 = parse_subset(g32, "00000,11111");
    report.witness32_ok = b1.size() == 4 && b2.size() == 2 && is_right_subfactor(a, b1) &&
                          is_right_subfactor(a, b2);
  }
  {
    FiniteGroup g49 = parse_group_spec("C7xC7");
    Subset a = parse_subset(g49, "00,01,10");
    Subset b1 = parse_subset(g49, "00,02,22,24,26,30,41,44,52,65");
    Subset b2 = parse_subset(g49, "00,04,11,15,22,33,36,40,44,51,55,62,66");
    report.witness49_ok = b1.size() == 10 && b2.size() == 13 && is_right_subfactor(a, b1) &&
                          is_right_subfactor(a, b2);
  }
  return report;
}

ZnPairResult zn_pair_index(int n, const SearchOptions& opts) {
  if (n < 2 || n > kMaxOrder) throw Error("zn_pair_index requires 2 <= n <= 64");
  FiniteGroup g = parse_group_spec("C" + std::to_string(n));
  Subset a = Subset::of(g, {0, 1});

  ZnPairResult r;
  r.n = n;
  r.lower = lower_index(a, Side::right, opts);
  r.upper = upper_index(a, Side::right, opts);
  int ceil_n3 = (n + 2) / 3;
  r.matches_closed_form = r.lower == ceil_n3 && r.upper == n / 2;

  for (int i = 0; i < n / 2; ++i) r.b_even.push_back(2 * i);
  if (n % 3 != 1) {
    for (int i = 0; i < ceil_n3; ++i) r.b_prime.push_back(3 * i);
  } else {
    for (int i = 0; i + 1 < ceil_n3; ++i) r.b_prime.push_back(3 * i);
    r.b_prime.push_back(3 * ceil_n3 - 4);
  }
  Subset be = Subset::of(g, r.b_even);
  Subset bp = Subset::of(g, r.b_prime);
  r.b_even_is_subfactor = be.size() == n / 2 && is_right_subfactor(a, be);
  r.b_prime_is_subfactor = bp.size() == ceil_n3 && is_right_subfactor(a, bp);
  return r;
}

bool CounterexampleReport::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass; });
}

namespace {

std::string show_indices(const SubIndexReport& r) {
  std::ostringstream out;
  out << "right (" << r.lower_right << "," << r.upper_right << ") left (" << r.lower_left << ","
      << r.upper_left << ")";
  return out.str();
}

}  // namespace

CounterexampleReport run_counterexample_suite(const Catalog& catalog,
                                              const SearchOptions& opts) {
  CounterexampleReport report;
  auto add = [&](const std::string& id, const std::string& claim, auto&& fn) {
    CaseResult r;
    r.id = id;
    r.claim = claim;
    try {
      fn(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.evidence = std::string("error: ") + e.what();
    }
    report.cases.push_back(std::move(r));
  };

  add("IIIh", "Dif^2=G, Dif!=G, right stable does not force right index 2", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("C3xC3");
    Subset a = parse_subset(g, "00,01,10");
    Subset dif = difference_set(a, Side::left);
    Subset dif2 = product(dif, dif);
    auto rep = sub_index_report(a, opts);
    bool hyp = dif.mask() != g.full_mask() && dif2.mask() == g.full_mask() && rep.right_stable;
    r.pass = hyp && rep.lower_right != 2;
    std::ostringstream ev;
    ev << "|Dif|=" << dif.size() << " |Dif^2|=" << dif2.size() << " " << show_indices(rep);
    r.evidence = ev.str();
  });

  add("IIIh-conv", "right index 2 does not force Dif^2=G and Dif!=G", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("C2");
    Subset a = parse_subset(g, "0");
    Subset dif = difference_set(a, Side::left);
    Subset dif2 = product(dif, dif);
    auto rep = sub_index_report(a, opts);
    bool conclusion = dif2.mask() == g.full_mask() && dif.mask() != g.full_mask();
    r.pass = rep.right_stable && rep.lower_right == 2 && !conclusion;
    r.evidence = show_indices(rep) + " |Dif|=" + std::to_string(dif.size()) +
                 " |Dif^2|=" + std::to_string(dif2.size());
  });

  add("IVa-C12", "A1 in A2 with |G:A2|^- > |G:A1|^- (C12 witness pair)", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("C12");
    Subset a1 = parse_subset(g, "0,1,6");
    Subset a2 = parse_subset(g, "0,1,5,6");
    int l1 = lower_index(a1, Side::right, opts);
    int l2 = lower_index(a2, Side::right, opts);
    r.pass = l2 > l1;
    std::ostringstream ev;
    ev << "|G:A1|^-=" << l1 << " |G:A2|^-=" << l2 << " (upper A1=" <<
        upper_index(a1, Side::right, opts) << ", upper A2=" << upper_index(a2, Side::right, opts)
       << ")";
    r.evidence = ev.str();
  });

  add("IVa-C6", "|G:A2|^+ <= |G:A1|^- fails for A1=A2={0,1} in C6", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("C6");
    Subset a = parse_subset(g, "0,1");
    int lo = lower_index(a, Side::right, opts);
    int up = upper_index(a, Side::right, opts);
    r.pass = up > lo;
    r.evidence = "lower=" + std::to_string(lo) + " upper=" + std::to_string(up);
  });

  add("V-S3", "symmetric A with SubF_r(A) != SubF_l(A), sub-index values equal",
      [&](CaseResult& r) {
        FiniteGroup g = parse_group_spec("S3");
        Subset a = parse_subset(g, "(),(2,3)");
        bool symmetric = inverse(a) == a;
        auto fam_r = enumerate_right_subfactors(a, EnumerationMode::bounded_search, false, opts);
        auto fam_l = enumerate_left_subfactors(a, EnumerationMode::bounded_search, opts);
        auto rep = sub_index_report(a, opts);
        r.pass = symmetric && !(fam_r == fam_l) && rep.lower_right == rep.lower_left &&
                 rep.upper_right == rep.upper_left;
        r.evidence = "|SubF_r|=" + std::to_string(fam_r.size()) +
                     " |SubF_l|=" + std::to_string(fam_l.size()) + " " + show_indices(rep);
      });

  add("V-C3", "SubF_r(A) = SubF_l(A) with A not symmetric", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("C3");
    Subset a = parse_subset(g, "0,1");
    bool symmetric = inverse(a) == a;
    auto fam_r = enumerate_right_subfactors(a, EnumerationMode::bounded_search, false, opts);
    auto fam_l = enumerate_left_subfactors(a, EnumerationMode::bounded_search, opts);
    r.pass = !symmetric && fam_r == fam_l;
    r.evidence = "symmetric=" + std::string(symmetric ? "yes" : "no") +
                 " families equal=" + (fam_r == fam_l ? "yes" : "no");
  });

  add("I1-D10", "|A| > sqrt(|G|) with index 2 (not 1)", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("D10");
    Subset a = parse_subset(g, "1,a,b,a^4b");
    auto rep = sub_index_report(a, opts);
    r.pass = a.size() * a.size() > g.order() && rep.two_sided_stable && rep.index == 2;
    r.evidence = "|A|=" + std::to_string(a.size()) + " " + show_indices(rep);
  });

  add("I2-D10", "right and left stable with index 2 yet |A| <= |G|/3", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("D10");
    Subset a = parse_subset(g, "1,a,a^2");
    auto rep = sub_index_report(a, opts);
    r.pass = rep.two_sided_stable && rep.index == 2 && 3 * a.size() <= g.order();
    r.evidence = show_indices(rep);
  });

  add("I3-C10", "abelian, index 2, yet |A| <= |G|/3", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("C10");
    Subset a = parse_subset(g, "0,1,3");
    auto rep = sub_index_report(a, opts);
    r.pass = rep.two_sided_stable && rep.index == 2 && 3 * a.size() <= g.order();
    r.evidence = show_indices(rep);
  });

  add("I4-C10", "witness with |A| = ceil(sqrt(|G|)) and index 1", [&](CaseResult& r) {
    FiniteGroup g = parse_group_spec("C10");
    Subset a = parse_subset(g, "0,1,2,3");
    auto rep = sub_index_report(a, opts);
    int ceil_sqrt = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(g.order()))));
    r.pass = a.size() == ceil_sqrt && rep.two_sided_stable && rep.index == 1;
    r.evidence = "|A|=" + std::to_string(a.size()) + " ceil(sqrt(n))=" +
                 std::to_string(ceil_sqrt) + " " + show_indices(rep);
  });

  add("NewQuestion", "no subset with |A| = floor(sqrt(|G|)) and index 1, orders 2..16",
      [&](CaseResult& r) {
        // index 1 on both sides <=> Dif_l(A) = Dif_r(A) = G; scanning
        // identity-containing subsets suffices by translation invariance.
        std::string found;
        for (const CatalogEntry* e : catalog.up_to_order(16)) {
          const FiniteGroup& g = *e->group;
          int n = g.order();
          if (n < 2) continue;
          int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
          if (k < 1) continue;
          std::uint64_t stop = std::uint64_t{1} << (n - 1);
          std::uint64_t full = g.full_mask();
          if (k == 1) {
            // Singletons have index n, never 1 unless n = 1.
            continue;
          }
          for (std::uint64_t m = (std::uint64_t{1} << (k - 1)) - 1; m < stop;
               m = next_combination(m)) {
            std::uint64_t a_mask = (m << 1) | 1;
            detail::RightSearchCtx ctx(g, a_mask);
            if (ctx.dif != full) continue;
            std::uint64_t dif_r = 0;
            Subset a(g, a_mask);
            dif_r = difference_set(a, Side::right).mask();
            if (dif_r == full) {
              found = e->name + " A=" + a.to_string();
              break;
            }
          }
          if (!found.empty()) break;
        }
        r.pass = found.empty();
        r.evidence = found.empty() ? "no witness in any catalog group of order 2..16"
                                   : "found " + found;
      });

  add("NewConjecture", "Z_n (12<=n<=15) not k-index stable iff 2 <= k <= floor(n/3)",
      [&](CaseResult& r) {
        std::string mismatch;
        for (int n = 12; n <= 15 && mismatch.empty(); ++n) {
          FiniteGroup g = parse_group_spec("C" + std::to_string(n));
          for (int k = 2; k <= n / 2; ++k) {
            KStabilityCell cell = k_index_stability(g, k, opts);
            bool expect_unstable = k <= n / 3;
            if (cell.two_sided_stable != !expect_unstable) {
              mismatch = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " got " +
                         (cell.two_sided_stable ? "stable" : "unstable");
              break;
            }
          }
        }
        r.pass = mismatch.empty();
        r.evidence = mismatch.empty() ? "all cells match for n=12..15" : mismatch;
      });

  add("QIV", "|G:{1,a}|^- = |G:{1,a}|_- for all a, orders <= 12", [&](CaseResult& r) {
    std::string found;
    for (const CatalogEntry* e : catalog.up_to_order(12)) {
      const FiniteGroup& g = *e->group;
      for (int x = 0; x < g.order() && found.empty(); ++x) {
        Subset a = Subset::of(g, {0, x});
        int lr = lower_index(a, Side::right, opts);
        int ll = lower_index(a, Side::left, opts);
        if (lr != ll)
          found = e->name + " a=" + g.name(x) + " lower_right=" + std::to_string(lr) +
                  " lower_left=" + std::to_string(ll);
      }
      if (!found.empty()) break;
    }
    r.pass = found.empty();
    r.evidence = found.empty() ? "no counterexample through order 12" : found;
  });

  return report;
}

}  // namespace subf
