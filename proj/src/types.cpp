#include "qqm/types.hpp"

#include <set>
#include <stdexcept>

namespace qqm {

SimpleType SimpleType::real() {
  static const auto node = std::make_shared<const Node>(Node{Kind::Real, nullptr, nullptr});
  return SimpleType(node);
}

SimpleType SimpleType::prod(SimpleType left, SimpleType right) {
  return SimpleType(std::make_shared<const Node>(
      Node{Kind::Prod, std::make_shared<const SimpleType>(std::move(left)),
           std::make_shared<const SimpleType>(std::move(right))}));
}

SimpleType SimpleType::arrow(SimpleType dom, SimpleType cod) {
  return SimpleType(std::make_shared<const Node>(
      Node{Kind::Arrow, std::make_shared<const SimpleType>(std::move(dom)),
           std::make_shared<const SimpleType>(std::move(cod))}));
}

const SimpleType& SimpleType::left() const {
  if (!node_->left) throw std::logic_error("Real has no components");
  return *node_->left;
}

const SimpleType& SimpleType::right() const {
  if (!node_->right) throw std::logic_error("Real has no components");
  return *node_->right;
}

int SimpleType::order() const {
  switch (kind()) {
    case Kind::Real:
      return 0;
    case Kind::Prod:
      return std::max(left().order(), right().order());
    case Kind::Arrow:
      return std::max(left().order() + 1, right().order());
  }
  return 0;
}

bool SimpleType::isGround() const {
  switch (kind()) {
    case Kind::Real:
      return true;
    case Kind::Prod:
      return left().isGround() && right().isGround();
    case Kind::Arrow:
      return false;
  }
  return false;
}

std::string SimpleType::str() const {
  switch (kind()) {
    case Kind::Real:
      return "Real";
    case Kind::Prod: {
      // Product binds tighter than arrow; both operands are parenthesised
      // unless they are Real.
      auto wrap = [](const SimpleType& t) { return t.isReal() ? t.str() : "(" + t.str() + ")"; };
      return wrap(left()) + " * " + wrap(right());
    }
    case Kind::Arrow: {
      std::string l = left().isArrow() ? "(" + left().str() + ")" : left().str();
      return l + " -> " + right().str();
    }
  }
  return "?";
}

bool operator==(const SimpleType& a, const SimpleType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.isReal()) return true;
  return a.left() == b.left() && a.right() == b.right();
}

std::optional<std::size_t> TypingContext::lookup(const std::string& name) const {
  for (std::size_t i = entries_.size(); i-- > 0;) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

bool TypingContext::hasDistinctNames() const {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.name).second) return false;
  }
  return true;
}

TypingContext TypingContext::extended(std::string name, SimpleType type) const {
  auto copy = entries_;
  copy.push_back({std::move(name), std::move(type)});
  return TypingContext(std::move(copy));
}

TypingContext TypingContext::without(std::size_t index) const {
  auto copy = entries_;
  copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(index));
  return TypingContext(std::move(copy));
}

std::string TypingContext::str() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    out += entries_[i].name + " : " + entries_[i].type.str();
  }
  return out;
}

bool operator==(const TypingContext& a, const TypingContext& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].type != b[i].type) return false;
  }
  return true;
}

}  // namespace qqm
