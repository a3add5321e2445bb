#include "qqm/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qqm/functions.hpp"

namespace qqm {

void PrimitiveTable::add(Primitive p) {
  if (p.name.empty()) throw std::invalid_argument("primitive needs a name");
  prims_[p.name] = std::move(p);
}

const Primitive* PrimitiveTable::find(const std::string& name) const {
  auto it = prims_.find(name);
  return it == prims_.end() ? nullptr : &it->second;
}

const Primitive& PrimitiveTable::at(const std::string& name) const {
  const auto* p = find(name);
  if (!p) throw std::invalid_argument("unknown primitive: " + name);
  return *p;
}

std::vector<std::string> PrimitiveTable::names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : prims_) out.push_back(k);
  return out;
}

double PrimitiveTable::paramOf(const PrimRef& ref) const {
  const auto& p = at(ref.name);
  if (ref.param && !p.parametric) throw std::invalid_argument("primitive " + ref.name + " takes no parameter");
  return ref.param.value_or(p.defaultParam);
}

double PrimitiveTable::evaluate(const PrimRef& ref, std::span<const double> xs) const {
  const auto& p = at(ref.name);
  if (xs.size() != p.arity) throw std::invalid_argument("arity mismatch for primitive " + ref.name);
  return p.eval(paramOf(ref), xs);
}

namespace {

// sup |u v - u' v'| over the box; the map is bilinear so the corners attain it.
double mulModulus(double u, double v, double a, double b) {
  double uv = u * v;
  if (std::isinf(a) || std::isinf(b)) {
    bool uMoves = std::isinf(a) ? true : a > 0;
    bool vMoves = std::isinf(b) ? true : b > 0;
    // u' v' is unbounded unless the infinite factor is multiplied by a pinned zero.
    if (std::isinf(a) && !vMoves && v == 0) return std::fabs(uv);
    if (std::isinf(b) && !uMoves && u == 0) return std::fabs(uv);
    return kInf;
  }
  double best = 0.0;
  for (double du : {-a, a})
    for (double dv : {-b, b}) best = std::max(best, std::fabs(uv - (u + du) * (v + dv)));
  return best;
}

double trigModulus(double y, const Interval& img) { return std::max(y - img.lo, img.hi - y); }

}  // namespace

Primitive PrimitiveTable::builtinPrimitive(const std::string& builtin, double epsilon) {
  Primitive p;
  p.builtin = builtin;
  p.name = builtin;
  auto unitLip = [](double) { return std::vector<double>{1.0}; };
  if (builtin == "add") {
    p.arity = 1;
    p.parametric = true;
    p.defaultParam = epsilon;
    p.eval = [](double e, std::span<const double> x) { return x[0] + e; };
    p.modulus = [](double, std::span<const double>, std::span<const double> a) { return a[0]; };
    p.lipschitz = unitLip;
  } else if (builtin == "diff") {
    p.arity = 2;
    p.parametric = true;
    p.defaultParam = epsilon;
    p.eval = [](double e, std::span<const double> x) { return (x[0] - x[1]) / e; };
    p.modulus = [](double e, std::span<const double>, std::span<const double> a) { return (a[0] + a[1]) / std::fabs(e); };
    p.lipschitz = [](double e) { return std::vector<double>{1 / std::fabs(e), 1 / std::fabs(e)}; };
  } else if (builtin == "sin") {
    p.arity = 1;
    p.eval = [](double, std::span<const double> x) { return std::sin(x[0]); };
    p.modulus = [](double, std::span<const double> x, std::span<const double> a) {
      return trigModulus(std::sin(x[0]), sinRange(x[0] - a[0], x[0] + a[0]));
    };
    p.lipschitz = unitLip;
  } else if (builtin == "cos") {
    p.arity = 1;
    p.eval = [](double, std::span<const double> x) { return std::cos(x[0]); };
    p.modulus = [](double, std::span<const double> x, std::span<const double> a) {
      return trigModulus(std::cos(x[0]), cosRange(x[0] - a[0], x[0] + a[0]));
    };
    p.lipschitz = unitLip;
  } else if (builtin == "mul") {
    p.arity = 2;
    p.eval = [](double, std::span<const double> x) { return x[0] * x[1]; };
    p.modulus = [](double, std::span<const double> x, std::span<const double> a) {
      return mulModulus(x[0], x[1], a[0], a[1]);
    };
  } else if (builtin == "add2") {
    p.arity = 2;
    p.eval = [](double, std::span<const double> x) { return x[0] + x[1]; };
    p.modulus = [](double, std::span<const double>, std::span<const double> a) { return a[0] + a[1]; };
    p.lipschitz = [](double) { return std::vector<double>{1.0, 1.0}; };
  } else if (builtin == "neg") {
    p.arity = 1;
    p.eval = [](double, std::span<const double> x) { return -x[0]; };
    p.modulus = [](double, std::span<const double>, std::span<const double> a) { return a[0]; };
    p.lipschitz = unitLip;
  } else if (builtin == "const") {
    p.arity = 1;
    p.parametric = true;
    p.defaultParam = 0.0;
    p.eval = [](double c, std::span<const double>) { return c; };
    p.modulus = [](double, std::span<const double>, std::span<const double>) { return 0.0; };
    p.lipschitz = [](double) { return std::vector<double>{0.0}; };
  } else if (builtin == "abs") {
    p.arity = 1;
    p.eval = [](double, std::span<const double> x) { return std::fabs(x[0]); };
    p.modulus = [](double, std::span<const double>, std::span<const double> a) { return a[0]; };
    p.lipschitz = unitLip;
  } else if (builtin == "id") {
    p.arity = 1;
    p.eval = [](double, std::span<const double> x) { return x[0]; };
    p.modulus = [](double, std::span<const double>, std::span<const double> a) { return a[0]; };
    p.lipschitz = unitLip;
  } else {
    throw std::invalid_argument("unknown builtin primitive: " + builtin);
  }
  return p;
}

PrimitiveTable PrimitiveTable::defaults(double epsilon) {
  PrimitiveTable t;
  for (const char* b : {"add", "diff", "sin", "cos", "mul", "add2", "neg", "const", "abs", "id"})
    t.add(builtinPrimitive(b, epsilon));
  return t;
}

PrimitiveTable PrimitiveTable::fromManifest(const Json& manifest) {
  double eps = manifest.value("epsilon", 0.1);
  PrimitiveTable t;
  for (const auto& e : manifest.at("primitives")) {
    std::string builtin = e.at("builtin");
    Primitive p = builtinPrimitive(builtin, eps);
    if (e.contains("name")) p.name = e.at("name");
    if (e.contains("param")) {
      if (!p.parametric) throw std::invalid_argument("builtin " + builtin + " takes no parameter");
      p.defaultParam = e.at("param");
    }
    t.add(std::move(p));
  }
  return t;
}

Json PrimitiveTable::toJson() const {
  Json arr = Json::array();
  for (const auto& [name, p] : prims_) {
    Json e{{"name", name}, {"builtin", p.builtin}, {"arity", p.arity}};
    if (p.parametric) e["param"] = p.defaultParam;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace qqm
