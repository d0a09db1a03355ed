#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subf/catalog.hpp"
#include "subf/subfactor.hpp"
#include "subf/subindex.hpp"

namespace subf {

/// One table cell: is every size-k subset right / two-sided index stable?
/// `witness_mask` is the lexicographically least mask violating the strongest
/// failed property (right stability when the first bit is 0, otherwise
/// two-sided stability).
struct KStabilityCell {
  int k = 0;
  bool right_stable = true;
  bool two_sided_stable = true;
  std::optional<std::uint64_t> witness_mask;
};

struct StabilityRow {
  std::string name;
  int order = 0;
  int group_id = 0;                   // position within its order, 0 if unknown
  std::vector<KStabilityCell> cells;  // k = 2..order/2 when swept
  bool index_stable = false;
  std::optional<std::uint64_t> witness_mask;
  std::string witness_origin;  // e.g. "subgroup {..}" for shortcut verdicts
};

/// Sweeps all size-k subsets containing the identity (translation-orbit
/// pruning). k = 1 and k > |G|/2 are stable without search; k > |G| by
/// convention.
KStabilityCell k_index_stability(const FiniteGroup& g, int k, const SearchOptions& opts = {});

/// Whole-group verdict. With `shortcuts` a known-unstable proper subgroup
/// settles the answer (memoized, recursive); otherwise the k-sweep runs until
/// a violation or exhaustion. Both paths agree.
StabilityRow group_stability_verdict(const FiniteGroup& g, bool shortcuts,
                                     const SearchOptions& opts = {});

/// Full rows (all cells) for the given groups, in input order.
std::vector<StabilityRow> stability_table(const std::vector<const FiniteGroup*>& groups,
                                          const SearchOptions& opts = {});

std::string table_to_text(const std::vector<StabilityRow>& rows);
std::string table_to_markdown(const std::vector<StabilityRow>& rows);
std::string table_to_json(const std::vector<StabilityRow>& rows);

struct CharacterizationReport {
  struct Entry {
    std::string name;
    int order = 0;
    int id = 0;
    bool index_stable = false;
    std::optional<std::uint64_t> witness_mask;
    std::string witness_origin;
  };
  std::vector<Entry> groups;
  bool stable_set_matches = false;  // stable verdicts == the known 14, capped at max_order
  bool witness32_ok = false;        // the order-32 fixed sub-factor pair check
  bool witness49_ok = false;        // the order-49 fixed sub-factor pair check
  bool ok() const { return stable_set_matches && witness32_ok && witness49_ok; }
};

/// Classifies every catalog group of order <= max_order and runs the two
/// fixed large-order witness checks. Throws CatalogError when the catalog
/// does not carry the full set of isomorphism types per order.
CharacterizationReport verify_characterization(const Catalog& catalog, int max_order,
                                               const SearchOptions& opts = {});

struct ZnPairResult {
  int n = 0;
  int lower = 0;
  int upper = 0;
  bool matches_closed_form = false;     // lower == ceil(n/3), upper == floor(n/2)
  std::vector<ElementId> b_even;        // the size-floor(n/2) construction
  std::vector<ElementId> b_prime;       // the size-ceil(n/3) construction
  bool b_even_is_subfactor = false;
  bool b_prime_is_subfactor = false;
  bool ok() const { return matches_closed_form && b_even_is_subfactor && b_prime_is_subfactor; }
};

/// (lower, upper) right sub-indices of {0,1} in Z_n plus the two explicit
/// witness constructions attaining them.
ZnPairResult zn_pair_index(int n, const SearchOptions& opts = {});

struct CaseResult {
  std::string id;
  std::string claim;
  bool pass = false;
  std::string evidence;
};

struct CounterexampleReport {
  std::vector<CaseResult> cases;
  bool all_pass() const;
};

/// Runs the fixed registry of counterexample and sweep checks. Every case
/// reports independently; the suite never aborts early.
CounterexampleReport run_counterexample_suite(const Catalog& catalog,
                                              const SearchOptions& opts = {});

}  // namespace subf
