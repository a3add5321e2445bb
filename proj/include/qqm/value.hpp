#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace qqm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed real interval; endpoints may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A denotation: real scalar, pair, or function value.
///
/// Function values may carry an exact range oracle (`range(lo, hi)` returns
/// the image of [lo, hi]). Only functions Real -> Real use it; it lets
/// distances between such functions be computed exactly instead of on a grid.
class SemValue {
 public:
  using Fn = std::function<SemValue(const SemValue&)>;
  using RangeFn = std::function<Interval(double, double)>;

  static SemValue real(double x);
  static SemValue pair(SemValue l, SemValue r);
  static SemValue function(Fn fn, std::string label, RangeFn range = {});

  bool isReal() const { return node_->kind == Kind::Real; }
  bool isPair() const { return node_->kind == Kind::Pair; }
  bool isFunction() const { return node_->kind == Kind::Fun; }

  double asReal() const;
  const SemValue& first() const;
  const SemValue& second() const;
  SemValue apply(const SemValue& arg) const;
  /// Convenience for Real -> Real functions.
  double operator()(double x) const { return apply(real(x)).asReal(); }

  const std::string& label() const { return node_->label; }
  const RangeFn& range() const { return node_->range; }
  bool hasRange() const { return static_cast<bool>(node_->range); }

  std::string str() const;

 private:
  enum class Kind { Real, Pair, Fun };
  struct Node {
    Kind kind;
    double real = 0.0;
    std::shared_ptr<const SemValue> first;
    std::shared_ptr<const SemValue> second;
    Fn fn;
    std::string label;
    RangeFn range;
  };
  explicit SemValue(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// An element of a quantale: extended nonnegative scalar, pair, error
/// function (x, a) -> Q_B, lifted element (empty or {a}), or an index into a
/// finite table quantale.
class QuantaleValue {
 public:
  enum class Tag { Scalar, Pair, ErrFun, Lift, Finite };
  using ErrFn = std::function<QuantaleValue(const SemValue&, const QuantaleValue&)>;

  static QuantaleValue scalar(double x);
  static QuantaleValue pair(QuantaleValue l, QuantaleValue r);
  /// `exact` is false when evaluation involves sampling (e.g. a residual
  /// computed on a finite chain).
  static QuantaleValue errFun(ErrFn fn, std::string label, bool exact = true);
  static QuantaleValue lift(std::optional<QuantaleValue> content);
  static QuantaleValue emptyLift() { return lift(std::nullopt); }
  static QuantaleValue finite(std::size_t index);

  Tag tag() const { return node_->tag; }
  bool isScalar() const { return tag() == Tag::Scalar; }
  bool isPair() const { return tag() == Tag::Pair; }
  bool isErrFun() const { return tag() == Tag::ErrFun; }
  bool isLift() const { return tag() == Tag::Lift; }
  bool isFinite() const { return tag() == Tag::Finite; }

  double asScalar() const;
  const QuantaleValue& first() const;
  const QuantaleValue& second() const;
  QuantaleValue apply(const SemValue& x, const QuantaleValue& a) const;
  /// Scalar shorthand for error functions over Real -> Real.
  double operator()(double x, double a) const { return apply(SemValue::real(x), scalar(a)).asScalar(); }
  bool exact() const { return node_->exact; }
  bool isEmptyLift() const;
  const QuantaleValue& liftContent() const;
  std::size_t finiteIndex() const;

  const std::string& label() const { return node_->label; }
  std::string str() const;

 private:
  struct Node {
    Tag tag;
    double scalar = 0.0;
    std::shared_ptr<const QuantaleValue> first;
    std::shared_ptr<const QuantaleValue> second;
    ErrFn fn;
    std::string label;
    bool exact = true;
    std::size_t index = 0;
  };
  explicit QuantaleValue(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Formats a double the way reports print it ("inf" for +infinity).
std::string formatReal(double x);

}  // namespace qqm
