#pragma once

#include <string>
#include <vector>

#include "qqm/functions.hpp"
#include "qqm/quantale.hpp"
#include "qqm/sampler.hpp"
#include "qqm/semantics.hpp"
#include "qqm/term.hpp"
#include "qqm/types.hpp"
#include "qqm/verdict.hpp"

namespace qqm {

struct MembershipQuery {
  SimpleType type;
  SemValue left;
  QuantaleValue radius;
  SemValue right;
  SamplerConfig sampler;
};

/// Is (x, a, y) in rho_A? Exact at Real; sampled over related input triples
/// at arrow types, where both clauses (fx, d(x,a), gy) and (fx, d(x,a), fy)
/// are checked.
Verdict member(const MembershipQuery& q);
Verdict member(const SimpleType& type, const SemValue& x, const QuantaleValue& a, const SemValue& y,
               const SamplerConfig& cfg);

struct DistanceOptions {
  GridPolicy grid;
  bool forceGrid = false;
  /// Grid points per dimension for boxes of dimension > 1 and for sampled
  /// codomains.
  std::size_t coarseResolution = 33;
};

struct DistanceEstimate {
  QuantaleValue value;
  std::string mode;  // exact | grid | sampled
  std::size_t resolution = 0;
  std::size_t samples = 0;
  Json toJson() const;
};

/// rho-hat_{A=>B}(f, g)(x, a): the meet over y with (x, a, y) in rho_A of
/// rho-hat_B(fx, gy) and rho-hat_B(fx, fy). Exact for Real => Real with range
/// oracles, a grid under-approximation at other ground types, sampled above.
DistanceEstimate rhoHatArrow(const SimpleType& arrow, const SemValue& f, const SemValue& g, const SemValue& x,
                             const QuantaleValue& a, const SamplerConfig& cfg, const DistanceOptions& opts = {});

/// rho-hat_A(x, y) as a quantale element (error function at arrow types).
QuantaleValue rhoHat(const SimpleType& type, const SemValue& x, const SemValue& y, const SamplerConfig& cfg,
                     const DistanceOptions& opts = {});

/// sigma_x = rho-hat_A(x, x).
QuantaleValue selfDistance(const SimpleType& type, const SemValue& x, const SamplerConfig& cfg,
                           const DistanceOptions& opts = {});

/// sigma_f(x, sigma_x) = sigma_{fx} on sampled x.
Verdict checkSelfDistanceLemma(const SimpleType& arrow, const SemValue& f, const SamplerConfig& cfg, double tol,
                               const DistanceOptions& opts = {});

/// Equality of two quantale elements within tol on scalars (sampled on
/// error functions).
Verdict quantaleEqual(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b, double tol,
                      const SamplerConfig& cfg);

struct TwoTermBound {
  double bound = 0.0;
  double gap = 0.0;      // |[[t]](x) - [[s]](x)|
  double tBullet = 0.0;  // [[t]]-bullet(x, a)
  double sBullet = 0.0;  // [[s]]-bullet(x, a)
  Verdict membership;    // ([[t]], d, [[s]]) in rho_{A=>Real} on samples
  Json toJson() const;
};

/// d(x, a) = max(|[[t]]x - [[s]]x| + [[s]]-bullet(x, a), [[t]]-bullet(x, a)) for closed t, s : A => Real.
TwoTermBound twoTermBound(const Semantics& sem, const Term& t, const Term& s, const SimpleType& dom,
                          const SemValue& x, const QuantaleValue& a, const SamplerConfig& cfg);

struct BoundReplay {
  double epsilon = 0.0;
  double radius = 0.0;
  double bound = 0.0;        // max(a / eps, sup_{|y| <= a} |1 - (sin(y + eps) - sin y) / eps|)
  double actual = 0.0;       // |F(id, 0) - F(sin, a)|
  double derivative = 0.0;   // D((id, 0), (rho-hat(id, sin), a)) from the derivative semantics
  double derivativeFormula = 0.0;  // (d(eps, a) + d(0, a)) / eps evaluated directly
  std::size_t resolution = 0;
  bool holds = false;
  Json toJson() const;
};

/// The finite-difference example: F = [[f, x |- let y be add(x) in diff(f y, f x)]].
BoundReplay exampleBoundReplay(double epsilon, double radius, std::size_t resolution = 4097);

struct NoGreatestReport {
  std::vector<std::string> definableFunctions;
  Json classification;     // corpus terms of type Real => Real, constant or identity
  Json candidates;         // functionals F tested for (O, D, F) in rho
  std::vector<std::string> survivors;
  Json dTable;             // D(f, d) on probes
  Verdict ODZMembership;   // (O, D, Z) in delta
  double JO = 0.0;
  double JZ = 0.0;
  double sigmaJOD = 0.0;
  Verdict violated;        // (JO, sigma_J(O, D), JZ) in delta_Real; expected Refuted
  Json toJson() const;
};

/// Replays the argument that no greatest differential prelogical relation
/// exists. Requires an empty primitive table.
NoGreatestReport replayNoGreatestCounterexample(const PrimitiveTable& prims, const SamplerConfig& cfg);

}  // namespace qqm
