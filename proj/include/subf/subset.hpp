#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "subf/group.hpp"

namespace subf {

enum class Side { left, right };

/// A subset of one FiniteGroup, stored as an n-bit mask. Value type: all
/// operations return fresh subsets, nothing mutates in place.
class Subset {
 public:
  Subset(const FiniteGroup& g, std::uint64_t mask) : group_(&g), mask_(mask & g.full_mask()) {}

  static Subset empty(const FiniteGroup& g) { return Subset(g, 0); }
  static Subset full(const FiniteGroup& g) { return Subset(g, g.full_mask()); }
  static Subset of(const FiniteGroup& g, std::initializer_list<ElementId> ids);
  static Subset of(const FiniteGroup& g, const std::vector<ElementId>& ids);

  const FiniteGroup& group() const { return *group_; }
  std::uint64_t mask() const { return mask_; }
  int size() const;
  bool is_empty() const { return mask_ == 0; }
  bool contains(ElementId e) const { return (mask_ >> e) & 1; }

  std::vector<ElementId> elements() const;
  /// "{name,name,...}" in ascending index order.
  std::string to_string() const;

  friend bool operator==(const Subset& a, const Subset& b) {
    return a.group_ == b.group_ && a.mask_ == b.mask_;
  }
  /// Canonical order: by size, then by mask as an integer.
  friend bool operator<(const Subset& a, const Subset& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.mask_ < b.mask_;
  }

 private:
  const FiniteGroup* group_;
  std::uint64_t mask_;
};

/// Dif_l(A) = A^-1 A  or  Dif_r(A) = A A^-1. Symmetric, contains the
/// identity whenever A is non-empty.
Subset difference_set(const Subset& a, Side side);

/// G minus Dif_l(A).
Subset left_complement(const Subset& a);

/// {ab : a in A, b in B}.
Subset product(const Subset& a, const Subset& b);

/// {a^-1 : a in A}.
Subset inverse(const Subset& a);

/// gA (left) or Ag (right).
Subset translate(const Subset& a, ElementId g, Side side);

/// True iff every element of AB has a unique representation ab. Implemented
/// as the mask test Dif_l(A) & Dif_r(B) == {identity}; vacuously true when
/// either side is empty.
bool is_direct(const Subset& a, const Subset& b);

/// r = floor(|G| / |A|); A lies in the partition class A_r(G).
int partition_class(const Subset& a);

/// Deduplicated collection of subsets of one group in canonical order
/// (size, then mask).
class SubsetFamily {
 public:
  SubsetFamily() = default;
  SubsetFamily(const FiniteGroup& g, std::vector<std::uint64_t> masks);

  const std::vector<Subset>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const Subset& s) const;
  std::vector<std::uint64_t> masks() const;

  friend bool operator==(const SubsetFamily& a, const SubsetFamily& b) {
    return a.members_ == b.members_;
  }

 private:
  std::vector<Subset> members_;
};

/// Parses the CLI subset syntax: comma-separated element names or indices,
/// commas inside parentheses do not split (permutation names, tuples).
Subset parse_subset(const FiniteGroup& g, std::string_view text);

/// Every subgroup of g, found by breadth-first closure over generator sets.
SubsetFamily all_subgroups(const FiniteGroup& g);

/// Realizes a subgroup (given as a mask) as a standalone FiniteGroup. The
/// identity stays at index 0; `to_parent`, when given, receives the map from
/// new indices back to elements of g.
FiniteGroup subgroup_as_group(const FiniteGroup& g, std::uint64_t subgroup_mask,
                              std::vector<ElementId>* to_parent = nullptr);

}  // namespace subf
