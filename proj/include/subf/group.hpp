#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subf/errors.hpp"

namespace subf {

/// Largest supported group order; one subset fits a 64-bit mask.
inline constexpr int kMaxOrder = 64;

/// Index of an element in a FiniteGroup; the identity is always 0.
using ElementId = int;

/// A finite group given by its full multiplication table.
///
/// Immutable after construction and safe to share read-only across threads.
/// Validation (Latin square, identity at 0, inverses, associativity) runs in
/// every factory, so a constructed instance always satisfies the group axioms.
class FiniteGroup {
 public:
  /// Validates and adopts the given order-n table. `mul` is row-major n*n.
  /// The identity must already sit at index 0; use load_cayley_table() for
  /// tables that need identity normalization.
  static FiniteGroup from_table(int n, std::vector<std::uint8_t> mul,
                                std::vector<std::string> names, std::string spec);

  int order() const { return order_; }
  ElementId mul(ElementId a, ElementId b) const {
    return mul_[static_cast<std::size_t>(a) * order_ + b];
  }
  ElementId inv(ElementId a) const { return inv_[a]; }
  const std::string& name(ElementId a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& spec() const { return spec_; }

  int element_order(ElementId a) const { return elem_order_[a]; }
  bool is_abelian() const { return abelian_; }
  std::uint64_t full_mask() const {
    return order_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << order_) - 1;
  }

  /// Mask of {g*x : x in mask} (side == left) or {x*g : x in mask}.
  std::uint64_t translate_mask(std::uint64_t mask, ElementId g, bool left) const;
  /// Mask of {x^-1 : x in mask}.
  std::uint64_t invert_mask(std::uint64_t mask) const;

  /// Resolves an element name; accepts registered aliases and plain indices.
  std::optional<ElementId> element_by_name(std::string_view token) const;

  /// Serialized multiplication table; equal iff the labeled tables are equal.
  std::string table_key() const;

  void add_alias(std::string_view alias, ElementId id);
  void set_spec(std::string spec) { spec_ = std::move(spec); }

 private:
  FiniteGroup() = default;

  int order_ = 0;
  std::vector<std::uint8_t> mul_;
  std::vector<std::uint8_t> inv_;
  std::vector<std::string> names_;
  std::map<std::string, ElementId, std::less<>> name_index_;
  std::string spec_;
  std::vector<std::uint8_t> elem_order_;
  bool abelian_ = false;
};

/// Parses the group-spec DSL: atoms C<n>, D<2n>, Dic<n> (Q8=Dic2, Q16=Dic4),
/// S<n>, A<n>, QD16, M16; combinators `x` (direct product) and `^k`.
FiniteGroup parse_group_spec(std::string_view spec);

/// Parses the Cayley-table file format (`order n`, optional `names ...`,
/// then n rows). Elements are re-indexed so the identity is 0.
FiniteGroup load_cayley_table(std::string_view text);

/// Emits the exact file format accepted by load_cayley_table().
std::string emit_cayley_table(const FiniteGroup& g);

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

/// Outer semidirect product N x| H. `action[h]` must be an automorphism of N
/// and h -> action[h] a homomorphism. Multiplication:
/// (n1,h1)(n2,h2) = (n1 * action[h1](n2), h1*h2).
FiniteGroup semidirect_product(const FiniteGroup& n, const FiniteGroup& h,
                               const std::vector<std::vector<ElementId>>& action);

/// Brute-force isomorphism search; intended for orders <= 16.
/// Returns the element map G -> H if one exists.
std::optional<std::vector<ElementId>> find_isomorphism(const FiniteGroup& g,
                                                       const FiniteGroup& h);
bool are_isomorphic(const FiniteGroup& g, const FiniteGroup& h);

}  // namespace subf
