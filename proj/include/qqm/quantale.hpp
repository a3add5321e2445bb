#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qqm/sampler_config.hpp"
#include "qqm/types.hpp"
#include "qqm/value.hpp"
#include "qqm/verdict.hpp"

namespace qqm {

struct QuantaleShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A finite commutative integral quantale given by tables.
class FiniteQuantale {
 public:
  /// `order[i][j]` means element i is below element j. Throws
  /// std::invalid_argument listing every violated axiom.
  FiniteQuantale(std::vector<std::string> names, std::vector<std::vector<bool>> order,
                 std::vector<std::vector<std::size_t>> tensor, std::size_t unit);

  /// Every axiom violation of the given tables (empty when valid).
  static std::vector<std::string> violations(const std::vector<std::string>& names,
                                             const std::vector<std::vector<bool>>& order,
                                             const std::vector<std::vector<std::size_t>>& tensor, std::size_t unit);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index(const std::string& name) const;
  std::size_t at(const std::string& name) const;

  bool leq(std::size_t a, std::size_t b) const { return order_[a][b]; }
  std::size_t tensor(std::size_t a, std::size_t b) const { return tensor_[a][b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_[a][b]; }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a][b]; }
  std::size_t residual(std::size_t a, std::size_t b) const { return residual_[a][b]; }
  std::size_t join(std::span<const std::size_t> family) const;
  std::size_t meet(std::span<const std::size_t> family) const;
  std::size_t unit() const { return unit_; }
  std::size_t top() const { return unit_; }
  std::size_t bottom() const { return bottom_; }

  /// Numeric reading of each element for Lawvere truncations; empty otherwise.
  const std::vector<double>& numericValues() const { return numeric_; }
  void setNumericValues(std::vector<double> values);

  Json toJson() const;
  static std::shared_ptr<const FiniteQuantale> fromJson(const Json& j);

  // Presets.
  static std::shared_ptr<const FiniteQuantale> boolean();
  static std::shared_ptr<const FiniteQuantale> godelChain(std::size_t n);
  static std::shared_ptr<const FiniteQuantale> lukasiewiczChain(std::size_t n);
  /// {0, 1, ..., ceiling, inf} with reversed order and addition capped at inf.
  static std::shared_ptr<const FiniteQuantale> truncatedLawvere(std::size_t ceiling);
  /// The four-element Boolean frame with meet as tensor.
  static std::shared_ptr<const FiniteQuantale> diamond();
  static std::shared_ptr<const FiniteQuantale> lifted(const FiniteQuantale& base);
  static std::shared_ptr<const FiniteQuantale> product(const FiniteQuantale& l, const FiniteQuantale& r);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> order_;
  std::vector<std::vector<std::size_t>> tensor_, join_, meet_, residual_;
  std::size_t unit_ = 0, bottom_ = 0;
  std::vector<double> numeric_;
};

using FiniteQuantalePtr = std::shared_ptr<const FiniteQuantale>;

class QuantaleDescriptor;

/// Domain of a function quantale: either the carrier of a type or an explicit
/// list of points.
struct CarrierDescriptor {
  std::optional<SimpleType> type;
  std::vector<SemValue> points;
  std::string str() const;
};

class QuantaleDescriptor {
 public:
  enum class Shape { Lawvere, Product, FunSpace, Lifted, FiniteTable };

  static QuantaleDescriptor lawvere();
  static QuantaleDescriptor product(QuantaleDescriptor l, QuantaleDescriptor r);
  static QuantaleDescriptor funSpace(CarrierDescriptor carrier, QuantaleDescriptor inner, QuantaleDescriptor outer);
  static QuantaleDescriptor lifted(QuantaleDescriptor base);
  static QuantaleDescriptor finiteTable(FiniteQuantalePtr table);

  Shape shape() const { return node_->shape; }
  const QuantaleDescriptor& left() const;
  const QuantaleDescriptor& right() const;
  const CarrierDescriptor& carrier() const;
  const QuantaleDescriptor& inner() const;
  const QuantaleDescriptor& outer() const;
  const QuantaleDescriptor& base() const;
  const FiniteQuantale& table() const;

  std::string str() const;
  /// Structural shape equality (function carriers compared by printed form).
  bool sameShape(const QuantaleDescriptor& other) const;

 private:
  struct Node {
    Shape shape;
    std::shared_ptr<const QuantaleDescriptor> a, b, c;
    CarrierDescriptor carrier;
    FiniteQuantalePtr table;
  };
  explicit QuantaleDescriptor(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Throws QuantaleShapeError when the value's tag does not fit the descriptor.
void checkShape(const QuantaleDescriptor& q, const QuantaleValue& v);

QuantaleValue unit(const QuantaleDescriptor& q);
QuantaleValue top(const QuantaleDescriptor& q);
QuantaleValue bottom(const QuantaleDescriptor& q);

Verdict leq(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b,
            const SamplerConfig& cfg = SamplerConfig{});
QuantaleValue tensor(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b);
QuantaleValue meet(const QuantaleDescriptor& q, const std::vector<QuantaleValue>& family);
QuantaleValue join(const QuantaleDescriptor& q, const std::vector<QuantaleValue>& family);
QuantaleValue residual(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b,
                       const SamplerConfig& cfg = SamplerConfig{});

/// Elements above `a` (a chain for Lawvere and its products; every element
/// above `a` for finite tables). The first element is `a` itself.
std::vector<QuantaleValue> chainAbove(const QuantaleDescriptor& q, const QuantaleValue& a, std::size_t n);

/// Sample points (x, a) on which function-quantale elements are compared.
std::vector<std::pair<SemValue, QuantaleValue>> funSpaceProbes(const QuantaleDescriptor& q, const SamplerConfig& cfg);

/// Representative elements of a quantale (exhaustive for finite tables).
std::vector<QuantaleValue> sampleElements(const QuantaleDescriptor& q, const SamplerConfig& cfg);

}  // namespace qqm
