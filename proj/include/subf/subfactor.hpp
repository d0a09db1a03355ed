#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "subf/subset.hpp"

namespace subf {

/// Three independent engines for sub-factor family enumeration. They must
/// produce identical families; bounded_search is the production path,
/// brute_force the definitional oracle.
enum class EnumerationMode { bounded_search, algorithm_branching, brute_force };

/// Which characterization is_right_subfactor evaluates. Both agree; eq21 is
/// the two-mask test, eq23 the per-element intersection form.
enum class Criterion { eq21, eq23 };

enum class Chooser { deterministic_min, seeded_random };

/// Knobs shared by every search entry point. Exceeding `node_budget` raises
/// BudgetExceededError rather than returning truncated results.
struct SearchOptions {
  std::uint64_t node_budget = 100'000'000;
  int workers = 1;
  std::uint64_t seed = 0;
};

/// One run of the greedy construction: the seed, the elements chosen, and the
/// shrinking candidate states C^(0) .. C^(N) (the last one empty).
struct AlgorithmTrace {
  ElementId seed = 0;
  std::vector<ElementId> chosen;  // g_1 .. g_N
  std::vector<Subset> states;     // states[n] = C^(n); states.back() empty
  int terminal() const { return static_cast<int>(states.size()) - 1; }
};

/// Is B an inclusion-maximal subset with AB direct, i.e. a right sub-factor
/// of G related to A?
bool is_right_subfactor(const Subset& a, const Subset& b, Criterion criterion = Criterion::eq21);

/// Is G = A * B a factorization (direct product covering the whole group)?
bool is_right_factor(const Subset& a, const Subset& b);

/// Grows {g0} into a right sub-factor by repeatedly picking an element of the
/// current candidate state. Deterministic for Chooser::deterministic_min and
/// for any fixed seed.
std::pair<Subset, AlgorithmTrace> greedy_right_subfactor(const Subset& a, ElementId g0,
                                                         Chooser chooser,
                                                         std::uint64_t seed = 0);

/// The family of right sub-factors related to A. With `normalized` only the
/// members containing the identity are returned; otherwise all right
/// translates of those, deduplicated.
SubsetFamily enumerate_right_subfactors(const Subset& a, EnumerationMode mode, bool normalized,
                                        const SearchOptions& opts = {});

/// Maximal B with BA direct, computed as the inverses of the right family of
/// A^-1.
SubsetFamily enumerate_left_subfactors(const Subset& a, EnumerationMode mode,
                                       const SearchOptions& opts = {});

/// Searches for subsets A, B with |A| = a, |B| = b and G = A * B. A miss
/// within the budget means "not found", never "does not exist".
std::optional<std::pair<Subset, Subset>> find_factorization(const FiniteGroup& g, int a, int b,
                                                            const SearchOptions& opts = {});

/// JSON for a family: {"group","A","members","mode","normalized"}.
std::string family_to_json(const Subset& a, const SubsetFamily& family, EnumerationMode mode,
                           bool normalized);

}  // namespace subf
