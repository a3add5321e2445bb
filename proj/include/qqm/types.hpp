#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qqm {

/// Simple types: Real | A x B | A => B.
class SimpleType {
 public:
  enum class Kind { Real, Prod, Arrow };

  static SimpleType real();
  static SimpleType prod(SimpleType left, SimpleType right);
  static SimpleType arrow(SimpleType dom, SimpleType cod);

  Kind kind() const { return node_->kind; }
  bool isReal() const { return kind() == Kind::Real; }
  bool isProd() const { return kind() == Kind::Prod; }
  bool isArrow() const { return kind() == Kind::Arrow; }

  // Components of a product or arrow; calling these on Real throws.
  const SimpleType& left() const;
  const SimpleType& right() const;
  const SimpleType& dom() const { return left(); }
  const SimpleType& cod() const { return right(); }

  /// Nesting depth of arrows on the left of an arrow (Real is order 0).
  int order() const;
  /// True when the type is built from Real with products only.
  bool isGround() const;

  std::string str() const;

  friend bool operator==(const SimpleType& a, const SimpleType& b);
  friend bool operator!=(const SimpleType& a, const SimpleType& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::shared_ptr<const SimpleType> left;
    std::shared_ptr<const SimpleType> right;
  };
  explicit SimpleType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Ordered list of typed variables; later entries shadow earlier ones.
class TypingContext {
 public:
  struct Entry {
    std::string name;
    SimpleType type;
  };

  TypingContext() = default;
  explicit TypingContext(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

  /// Index of the innermost entry named `name`.
  std::optional<std::size_t> lookup(const std::string& name) const;
  bool hasDistinctNames() const;

  TypingContext extended(std::string name, SimpleType type) const;
  /// Context with entry `index` removed.
  TypingContext without(std::size_t index) const;

  std::string str() const;

  friend bool operator==(const TypingContext& a, const TypingContext& b);

 private:
  std::vector<Entry> entries_;
};

}  // namespace qqm
