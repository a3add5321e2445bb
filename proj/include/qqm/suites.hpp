#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qqm/corpus.hpp"
#include "qqm/metrics.hpp"
#include "qqm/qet.hpp"
#include "qqm/semantics.hpp"
#include "qqm/verdict.hpp"
#include "qqm/workbench.hpp"

namespace qqm {

inline constexpr const char* kReportSchema = "qqm-report/1";

/// Settings shared by every command. Flags override the QQM_* environment
/// variables, which override the defaults.
struct RunConfig {
  std::uint64_t seed = 20240601;
  double exactTol = 1e-9;
  double gridTol = 1e-3;
  std::size_t gridResolution = 4097;    // one-dimensional sup grids
  std::size_t coarseResolution = 33;    // per-dimension grids of boxes
  std::size_t samples = 1000;           // per corpus term / per random suite
  double epsilon = 0.1;                 // default parameter of add and diff
  std::string prims = "default";        // default | empty | <manifest file>
  std::string corpus = "default";       // default | pure | <corpus file>
  std::string out;                      // report path, stdout when empty
  std::size_t workers = 0;              // 0: hardware concurrency
  WorkbenchCaps caps;

  /// Throws std::invalid_argument on non-positive tolerances or zero samples.
  void validate() const;
  /// QQM_SEED, QQM_TOL, QQM_GRID_TOL, QQM_GRID, QQM_CAPS, QQM_PRIMS, QQM_CORPUS,
  /// QQM_OUT, QQM_SAMPLES, QQM_WORKERS, QQM_EPSILON.
  void applyEnvironment();
  /// "carrier=4,quantale=5,expCarrier=64,..." (any subset).
  void applyCaps(const std::string& spec);

  PrimitiveTable primitiveTable() const;
  SamplerConfig sampler() const;
  DistanceOptions distanceOptions() const;
  std::size_t workerCount() const;
  Json toJson() const;
};

/// {"schema", "command", "config", "verdict", "result"} with sorted keys.
Json makeReport(const std::string& command, const RunConfig& cfg, const Verdict& verdict, Json result);

struct SuiteResult {
  Verdict verdict;
  Json details;
};

/// |[[t]] gamma - [[t]] eps| <= [[t]]-bullet(gamma, xi) + exactTol over sampled
/// (gamma, xi, eps) in rho_Gamma, for every ground corpus entry. Real
/// entries draw eps within the radius; Real -> Real entries draw library
/// pairs with their exact distance.
SuiteResult fundamentalSuite(const Corpus& corpus, const Semantics& sem, const RunConfig& cfg,
                             const std::string& only = "");

/// The finite-difference bound at epsilon in {0.1, 0.01, 0.001}, a = epsilon^2.
SuiteResult boundSweep(const RunConfig& cfg, const std::vector<double>& epsilons = {0.1, 0.01, 0.001});

/// Reflexivity derivations for every corpus entry, soundness of random closed
/// derivations and their closure steps, substitution cross-checks, and the
/// broken weakening example.
SuiteResult qetSuite(const Corpus& corpus, const Semantics& sem, const RunConfig& cfg);

/// The finite shadows: exponential preserves the qqm axioms, the closure
/// theorem, the strong-transitivity implication chain, predicate/relation
/// round trips and weak-coproduct laws, over `trials` random instances.
SuiteResult theoremShadowSuite(const RunConfig& cfg, std::size_t trials = 100);

/// The no-greatest replay with the expected values JO = 0, JZ = 1, sigma = 0.
SuiteResult noGreatestSuite(const RunConfig& cfg);

/// Random Lawvere relations on n points satisfying `holds` and refuting
/// `fails`; null details when none is found.
SuiteResult mineSeparation(Axiom holds, Axiom fails, std::size_t n, std::size_t trials, const RunConfig& cfg);

/// Random Lawvere relation that is left and right quasi-reflexive: each
/// diagonal entry is numerically at most every entry of its row and column.
std::vector<double> randomBiReflexiveRelation(Rng& rng, std::size_t n, int maxValue, double pInf);

}  // namespace qqm
