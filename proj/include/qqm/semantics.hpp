#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "qqm/primitives.hpp"
#include "qqm/quantale.hpp"
#include "qqm/term.hpp"
#include "qqm/types.hpp"
#include "qqm/value.hpp"

namespace qqm {

using Environment = std::vector<SemValue>;
using ErrEnvironment = std::vector<QuantaleValue>;

enum class ModulusMode { Analytic, GridOracle };

struct ModulusOptions {
  ModulusMode mode = ModulusMode::Analytic;
  /// Grid points per argument in GridOracle mode.
  std::size_t resolution = 65;
  /// Half-width of the grid when a radius is infinite (GridOracle only).
  double infiniteReach = 1e3;
  /// Throw when a primitive has no analytic modulus; otherwise use +inf.
  bool strict = true;
};

struct MissingModulus : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string toString(ModulusMode mode);

/// Q_A: Lawvere at Real, products at products, function quantales at arrows.
QuantaleDescriptor quantaleOfType(const SimpleType& type);

/// alpha-bullet: sup |alpha(xs) - alpha(ys)| over the box |x_i - y_i| <= a_i.
/// Analytic mode is exact or over-approximates; GridOracle under-approximates.
double primModulus(const PrimitiveTable& prims, const PrimRef& ref, std::span<const double> xs,
                   std::span<const double> radii, const ModulusOptions& opts = {});

/// Value semantics and error-derivative semantics for a fixed primitive table.
class Semantics {
 public:
  explicit Semantics(PrimitiveTable prims, ModulusOptions opts = {});

  /// The set-theoretic value of ctx |- t under gamma.
  SemValue eval(const TypingContext& ctx, const Term& t, const Environment& gamma) const;
  /// The derivative of ctx |- t at (gamma, xi).
  QuantaleValue derive(const TypingContext& ctx, const Term& t, const Environment& gamma,
                       const ErrEnvironment& xi) const;

  SemValue evalClosed(const Term& t) const { return eval({}, t, {}); }
  QuantaleValue deriveClosed(const Term& t) const { return derive({}, t, {}, {}); }

  const PrimitiveTable& prims() const { return *prims_; }
  const ModulusOptions& options() const { return opts_; }

 private:
  std::shared_ptr<const PrimitiveTable> prims_;
  ModulusOptions opts_;
};

}  // namespace qqm
