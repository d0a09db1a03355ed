#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "subf/group.hpp"

namespace subf {

/// Number of isomorphism types per order 1..16.
inline constexpr std::array<int, 17> kGroupCountByOrder = {0, 1, 1, 1, 2, 1, 2, 1, 5,
                                                           2, 2, 1, 5, 1, 2, 1, 14};

struct CatalogEntry {
  int order = 0;
  int id = 0;  // position within the order, matching the usual small-group numbering
  std::string name;
  std::string path;
  std::unique_ptr<FiniteGroup> group;
};

/// The bundled collection of Cayley-table files, one per isomorphism type of
/// order <= 16, laid out as <dir>/order<NN>/g<NN>_<id>.cayley.
class Catalog {
 public:
  /// Environment variable SUBF_CATALOG_DIR overrides the compiled-in default.
  static std::string default_dir();
  static Catalog load(const std::string& dir = default_dir());

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  /// Entries with order <= max_order, sorted by (order, id).
  std::vector<const CatalogEntry*> up_to_order(int max_order) const;
  const CatalogEntry* find(int order, int id) const;
  const CatalogEntry* find_by_name(const std::string& name) const;

  /// Throws CatalogError if any order <= max_order is missing isomorphism
  /// types relative to kGroupCountByOrder.
  void require_complete(int max_order) const;

 private:
  std::vector<CatalogEntry> entries_;
};

}  // namespace subf
