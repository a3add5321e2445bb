#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qqm/sampler_config.hpp"
#include "qqm/types.hpp"

namespace qqm {

/// Seeded generator with platform-independent real draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [lo, hi].
  double uniform(double lo, double hi);
  std::size_t index(std::size_t n);
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// Seed derived from the config seed and a stream label, so independent
/// sample streams stay reproducible.
std::uint64_t streamSeed(std::uint64_t seed, const std::string& label);

/// Sample elements of |A|. Real draws come from the domain box; function
/// types use the builtin library (FullSpace) and the definable pool.
std::vector<SemValue> sampleValues(const SimpleType& type, const SamplerConfig& cfg);

/// Sample triples (x, a, y) that lie in the relation of type A: rho_A in
/// FullSpace mode, delta_A (definable elements only) in DefinableCorpus mode.
std::vector<RelTriple> sampleTriples(const SimpleType& type, const SamplerConfig& cfg);

}  // namespace qqm
