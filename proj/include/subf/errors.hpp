#pragma once

#include <stdexcept>
#include <string>

namespace subf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed group spec, subset string, or table text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Resulting group would exceed the 64-element cap.
class OrderLimitError : public Error {
 public:
  using Error::Error;
};

/// A Cayley table failed validation. `kind()` identifies the axiom.
class TableError : public Error {
 public:
  enum class Kind { not_latin, no_identity, missing_inverse, not_associative };

  TableError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Invalid semidirect-product action table.
class ActionError : public Error {
 public:
  enum class Kind { not_automorphism, not_homomorphism };

  ActionError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Two subsets bound to different group instances were combined.
class GroupMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptySubsetError : public Error {
 public:
  using Error::Error;
};

/// A search exceeded its node budget; partial results are unusable.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// Requested factorization sizes do not multiply to the group order.
class SizeMismatchError : public Error {
 public:
  using Error::Error;
};

class CatalogError : public Error {
 public:
  using Error::Error;
};

}  // namespace subf
