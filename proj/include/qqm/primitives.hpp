#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qqm/term.hpp"
#include "qqm/verdict.hpp"

namespace qqm {

/// A primitive alpha : R^n -> R. Parametric primitives (add, diff, const)
/// take a real parameter; a PrimRef without one uses `defaultParam`.
struct Primitive {
  using Eval = std::function<double(double param, std::span<const double> xs)>;
  /// Analytic modulus: sup |alpha(xs) - alpha(ys)| over |x_i - y_i| <= a_i,
  /// exact or an over-approximation.
  using Modulus = std::function<double(double param, std::span<const double> xs, std::span<const double> radii)>;

  std::string name;
  std::size_t arity = 0;
  bool parametric = false;
  double defaultParam = 0.0;
  Eval eval;
  Modulus modulus;
  /// Per-argument Lipschitz constants at a given parameter, when known.
  std::function<std::vector<double>(double param)> lipschitz;
  /// Name of the builtin evaluator (used by manifests and reports).
  std::string builtin;
};

class PrimitiveTable {
 public:
  void add(Primitive p);
  const Primitive* find(const std::string& name) const;
  const Primitive& at(const std::string& name) const;
  bool empty() const { return prims_.empty(); }
  std::size_t size() const { return prims_.size(); }
  std::vector<std::string> names() const;

  /// Parameter the reference resolves to.
  double paramOf(const PrimRef& ref) const;
  double evaluate(const PrimRef& ref, std::span<const double> xs) const;

  /// {add[eps], diff[eps], sin, cos, mul, add2, neg, const[c], abs, id}.
  static PrimitiveTable defaults(double epsilon = 0.1);
  static PrimitiveTable none() { return {}; }
  /// Manifest: {"epsilon": 0.1, "primitives": [{"name": "...", "builtin": "...", "param": p}]}.
  static PrimitiveTable fromManifest(const Json& manifest);
  /// A builtin primitive by evaluator name, renamed and re-parameterized.
  static Primitive builtinPrimitive(const std::string& builtin, double epsilon);

  Json toJson() const;

 private:
  std::map<std::string, Primitive> prims_;
};

}  // namespace qqm
