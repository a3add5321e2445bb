#include "qqm/value.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qqm {

std::string formatReal(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

SemValue SemValue::real(double x) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Real;
  n->real = x;
  return SemValue(std::move(n));
}

SemValue SemValue::pair(SemValue l, SemValue r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pair;
  n->first = std::make_shared<const SemValue>(std::move(l));
  n->second = std::make_shared<const SemValue>(std::move(r));
  return SemValue(std::move(n));
}

SemValue SemValue::function(Fn fn, std::string label, RangeFn range) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Fun;
  n->fn = std::move(fn);
  n->label = std::move(label);
  n->range = std::move(range);
  return SemValue(std::move(n));
}

double SemValue::asReal() const {
  if (!isReal()) throw std::logic_error("semantic value is not a real: " + str());
  return node_->real;
}

const SemValue& SemValue::first() const {
  if (!isPair()) throw std::logic_error("semantic value is not a pair: " + str());
  return *node_->first;
}

const SemValue& SemValue::second() const {
  if (!isPair()) throw std::logic_error("semantic value is not a pair: " + str());
  return *node_->second;
}

SemValue SemValue::apply(const SemValue& arg) const {
  if (!isFunction()) throw std::logic_error("semantic value is not a function: " + str());
  return node_->fn(arg);
}

std::string SemValue::str() const {
  switch (node_->kind) {
    case Kind::Real:
      return formatReal(node_->real);
    case Kind::Pair:
      return "<" + first().str() + ", " + second().str() + ">";
    case Kind::Fun:
      return node_->label.empty() ? "<fun>" : node_->label;
  }
  return "?";
}

QuantaleValue QuantaleValue::scalar(double x) {
  if (std::isnan(x) || x < 0) throw std::domain_error("scalar quantale values are in [0, inf]");
  auto n = std::make_shared<Node>();
  n->tag = Tag::Scalar;
  n->scalar = x;
  return QuantaleValue(std::move(n));
}

QuantaleValue QuantaleValue::pair(QuantaleValue l, QuantaleValue r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Pair;
  n->exact = l.exact() && r.exact();
  n->first = std::make_shared<const QuantaleValue>(std::move(l));
  n->second = std::make_shared<const QuantaleValue>(std::move(r));
  return QuantaleValue(std::move(n));
}

QuantaleValue QuantaleValue::errFun(ErrFn fn, std::string label, bool exact) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::ErrFun;
  n->fn = std::move(fn);
  n->label = std::move(label);
  n->exact = exact;
  return QuantaleValue(std::move(n));
}

QuantaleValue QuantaleValue::lift(std::optional<QuantaleValue> content) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Lift;
  if (content) {
    n->exact = content->exact();
    n->first = std::make_shared<const QuantaleValue>(std::move(*content));
  }
  return QuantaleValue(std::move(n));
}

QuantaleValue QuantaleValue::finite(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Finite;
  n->index = index;
  return QuantaleValue(std::move(n));
}

double QuantaleValue::asScalar() const {
  if (!isScalar()) throw std::logic_error("quantale value is not a scalar: " + str());
  return node_->scalar;
}

const QuantaleValue& QuantaleValue::first() const {
  if (!isPair()) throw std::logic_error("quantale value is not a pair: " + str());
  return *node_->first;
}

const QuantaleValue& QuantaleValue::second() const {
  if (!isPair()) throw std::logic_error("quantale value is not a pair: " + str());
  return *node_->second;
}

QuantaleValue QuantaleValue::apply(const SemValue& x, const QuantaleValue& a) const {
  if (!isErrFun()) throw std::logic_error("quantale value is not an error function: " + str());
  return node_->fn(x, a);
}

bool QuantaleValue::isEmptyLift() const {
  if (!isLift()) throw std::logic_error("quantale value is not a lifted element: " + str());
  return node_->first == nullptr;
}

const QuantaleValue& QuantaleValue::liftContent() const {
  if (isEmptyLift()) throw std::logic_error("empty lifted element has no content");
  return *node_->first;
}

std::size_t QuantaleValue::finiteIndex() const {
  if (!isFinite()) throw std::logic_error("quantale value is not a finite element: " + str());
  return node_->index;
}

std::string QuantaleValue::str() const {
  switch (tag()) {
    case Tag::Scalar:
      return formatReal(node_->scalar);
    case Tag::Pair:
      return "(" + first().str() + ", " + second().str() + ")";
    case Tag::ErrFun:
      return node_->label.empty() ? "<errfun>" : node_->label;
    case Tag::Lift:
      return node_->first ? "{" + node_->first->str() + "}" : "{}";
    case Tag::Finite:
      return "#" + std::to_string(node_->index);
  }
  return "?";
}

}  // namespace qqm
