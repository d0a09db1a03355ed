#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "subf/subfactor.hpp"
#include "subf/subset.hpp"

namespace subf {

enum class StabilityKind { right, left, two_sided };

/// The four sub-indices of a subset with their theoretical bounds, stability
/// flags, and witness sub-factors realizing the extreme sizes.
struct SubIndexReport {
  int upper_right = 0;
  int lower_right = 0;
  int upper_left = 0;
  int lower_left = 0;
  int bound_lower = 0;   // ceil(|G| / |Dif_l(A)|)
  int bound_upper = 0;   // floor(|G| / |A|)
  int bound_eq25 = 0;    // |G| - |Dif_l(A)| + 1
  bool right_stable = false;
  bool left_stable = false;
  bool two_sided_stable = false;
  std::optional<int> index;  // present iff two_sided_stable
  int partition_class = 0;
  bool relatively_strong_unstable_right = false;
  std::vector<ElementId> witness_right_max;
  std::vector<ElementId> witness_right_min;
  std::vector<ElementId> witness_left_max;
  std::vector<ElementId> witness_left_min;
};

/// sup of |B| over the sub-factors related to A on the given side; computed by
/// a descending-size bounded search with early exit.
int upper_index(const Subset& a, Side side, const SearchOptions& opts = {});

/// inf of |B| over the sub-factors related to A on the given side.
int lower_index(const Subset& a, Side side, const SearchOptions& opts = {});

SubIndexReport sub_index_report(const Subset& a, const SearchOptions& opts = {});

bool is_index_stable_subset(const Subset& a, StabilityKind kind, const SearchOptions& opts = {});

std::string report_to_json(const SubIndexReport& report);

/// Append-only persisted report cache keyed by (group spec, subset mask).
/// Entries are write-once; recomputation must produce identical values.
class ReportCache {
 public:
  explicit ReportCache(std::string path);

  std::optional<SubIndexReport> get(const FiniteGroup& g, std::uint64_t mask) const;
  void put(const FiniteGroup& g, std::uint64_t mask, const SubIndexReport& report);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::string path_;
  std::map<std::string, SubIndexReport> entries_;
};

}  // namespace subf
