#include "qqm/functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qqm {

namespace {

constexpr double kPi = std::numbers::pi;

bool containsPeriodicPoint(double phase, double lo, double hi) {
  // Is phase + 2*pi*k in [lo, hi] for some integer k?
  double k = std::ceil((lo - phase) / (2 * kPi));
  return phase + 2 * kPi * k <= hi;
}

double parseNumber(const std::string& s, const std::string& whole) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in library function name: " + whole);
  }
}

}  // namespace

Interval sinRange(double lo, double hi) {
  if (std::isinf(lo) || std::isinf(hi) || hi - lo >= 2 * kPi) return {-1.0, 1.0};
  double a = std::sin(lo), b = std::sin(hi);
  Interval r{std::min(a, b), std::max(a, b)};
  if (containsPeriodicPoint(kPi / 2, lo, hi)) r.hi = 1.0;
  if (containsPeriodicPoint(-kPi / 2, lo, hi)) r.lo = -1.0;
  return r;
}

Interval cosRange(double lo, double hi) {
  if (std::isinf(lo) || std::isinf(hi) || hi - lo >= 2 * kPi) return {-1.0, 1.0};
  double a = std::cos(lo), b = std::cos(hi);
  Interval r{std::min(a, b), std::max(a, b)};
  if (containsPeriodicPoint(0.0, lo, hi)) r.hi = 1.0;
  if (containsPeriodicPoint(kPi, lo, hi)) r.lo = -1.0;
  return r;
}

Interval absRange(double lo, double hi) {
  if (lo >= 0) return {lo, hi};
  if (hi <= 0) return {-hi, -lo};
  return {0.0, std::max(-lo, hi)};
}

Interval squareRange(double lo, double hi) {
  Interval a = absRange(lo, hi);
  return {a.lo * a.lo, a.hi * a.hi};
}

Interval affineRange(double slope, double offset, double lo, double hi) {
  if (slope == 0) return {offset, offset};
  double a = slope * lo + offset, b = slope * hi + offset;
  return {std::min(a, b), std::max(a, b)};
}

double maxDeviation(double c, const Interval& iv) {
  return std::max(std::fabs(c - iv.lo), std::fabs(c - iv.hi));
}

SemValue libraryFunction(const std::string& name) {
  auto real = [](auto f) { return [f](const SemValue& v) { return SemValue::real(f(v.asReal())); }; };
  if (name == "id") return SemValue::function(real([](double x) { return x; }), name, [](double lo, double hi) {
      return Interval{lo, hi};
    });
  if (name == "sin") return SemValue::function(real([](double x) { return std::sin(x); }), name, sinRange);
  if (name == "cos") return SemValue::function(real([](double x) { return std::cos(x); }), name, cosRange);
  if (name == "abs") return SemValue::function(real([](double x) { return std::fabs(x); }), name, absRange);
  if (name == "neg")
    return SemValue::function(real([](double x) { return -x; }), name,
                              [](double lo, double hi) { return Interval{-hi, -lo}; });
  if (name == "square") return SemValue::function(real([](double x) { return x * x; }), name, squareRange);
  if (name == "twice")
    return SemValue::function(real([](double x) { return 2 * x; }), name,
                              [](double lo, double hi) { return Interval{2 * lo, 2 * hi}; });
  if (name.rfind("const:", 0) == 0) {
    double c = parseNumber(name.substr(6), name);
    return SemValue::function(real([c](double) { return c; }), name,
                              [c](double, double) { return Interval{c, c}; });
  }
  if (name.rfind("affine:", 0) == 0) {
    auto rest = name.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("affine needs affine:<k>:<c>: " + name);
    double k = parseNumber(rest.substr(0, colon), name);
    double c = parseNumber(rest.substr(colon + 1), name);
    return SemValue::function(real([k, c](double x) { return k * x + c; }), name,
                              [k, c](double lo, double hi) { return affineRange(k, c, lo, hi); });
  }
  throw std::invalid_argument("unknown library function: " + name);
}

const std::vector<std::string>& libraryFunctionNames() {
  static const std::vector<std::string> names = {"id",      "sin",     "cos",          "abs",         "neg",
                                                 "square",  "twice",   "const:0",      "const:1",     "const:-2.5",
                                                 "affine:0.5:1", "affine:-3:0.25"};
  return names;
}

QuantaleValue exactArrowDistance(const SemValue& f, const SemValue& g) {
  if (!f.hasRange() || !g.hasRange()) throw std::invalid_argument("exact distance needs range oracles");
  return QuantaleValue::errFun(
      [f, g](const SemValue& x, const QuantaleValue& a) {
        double c = f(x.asReal());
        double lo = x.asReal() - a.asScalar(), hi = x.asReal() + a.asScalar();
        return QuantaleValue::scalar(std::max(maxDeviation(c, g.range()(lo, hi)), maxDeviation(c, f.range()(lo, hi))));
      },
      "dist(" + f.label() + "," + g.label() + ")");
}

DiskSup supDeviationOnDisk(double c, const SemValue& h, double x, double a, const GridPolicy& policy,
                           bool forceGrid) {
  double lo = x - a, hi = x + a;
  if (h.hasRange() && !forceGrid) {
    Interval img = h.range()(lo, hi);
    return {maxDeviation(c, img), true, 0};
  }
  if (a == 0) return {std::fabs(c - h(x)), true, 0};
  if (std::isinf(a)) {
    lo = x - policy.infiniteReach;
    hi = x + policy.infiniteReach;
  }
  auto pass = [&](std::size_t n) {
    double best = std::fabs(c - h(x));
    for (std::size_t i = 0; i < n; ++i) {
      double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      best = std::max(best, std::fabs(c - h(y)));
    }
    return best;
  };
  std::size_t n = std::max<std::size_t>(policy.initial, 2);
  double prev = pass(n);
  while (n < policy.cap) {
    std::size_t next = 2 * n - 1;  // keeps the previous points
    double cur = pass(next);
    n = next;
    bool stable = std::fabs(cur - prev) < policy.tol / 2;
    prev = cur;
    if (stable) break;
  }
  return {prev, false, n};
}

}  // namespace qqm
