#pragma once

#include <string>
#include <vector>

#include "qqm/value.hpp"

namespace qqm {

// Exact images of closed intervals (endpoints may be infinite).
Interval sinRange(double lo, double hi);
Interval cosRange(double lo, double hi);
Interval absRange(double lo, double hi);
Interval squareRange(double lo, double hi);
Interval affineRange(double slope, double offset, double lo, double hi);

/// sup { |c - v| : v in iv }.
double maxDeviation(double c, const Interval& iv);

/// Builtin Real -> Real functions with exact range oracles.
/// Names: id, sin, cos, abs, neg, square, twice, const:<c>, affine:<k>:<c>.
SemValue libraryFunction(const std::string& name);
/// Names accepted by libraryFunction that the samplers draw from.
const std::vector<std::string>& libraryFunctionNames();

/// Result of a supremum over a one-dimensional disk.
struct DiskSup {
  double value = 0.0;
  bool exact = false;
  std::size_t resolution = 0;  // grid points used on the final pass (0 when exact)
};

struct GridPolicy {
  std::size_t initial = 2048;
  std::size_t cap = 1 << 17;
  double tol = 1e-3;
  /// Half-width used when the radius is infinite and no range oracle exists.
  double infiniteReach = 1e3;
};

/// The least radius relating f to g at Real -> Real, computed exactly from
/// range oracles: (x, a) -> max(sup |f x - g y|, sup |f x - f y|) over
/// |x - y| <= a. Both functions must carry range oracles.
QuantaleValue exactArrowDistance(const SemValue& f, const SemValue& g);

/// sup over y in [x - a, x + a] of |c - h(y)|. Exact when `h` has a range
/// oracle (and `forceGrid` is false); otherwise a grid estimate that doubles
/// until two passes agree within tol / 2.
DiskSup supDeviationOnDisk(double c, const SemValue& h, double x, double a, const GridPolicy& policy,
                           bool forceGrid = false);

}  // namespace qqm
