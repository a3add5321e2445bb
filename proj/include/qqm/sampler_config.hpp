#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qqm/value.hpp"
#include "qqm/verdict.hpp"

namespace qqm {

enum class CarrierMode { FullSpace, DefinableCorpus };

/// A triple (x, a, y) in some relation.
struct RelTriple {
  SemValue left;
  QuantaleValue radius;
  SemValue right;
};

/// Definable elements and known related triples, keyed by the type's printed form.
struct ValuePool {
  std::map<std::string, std::vector<SemValue>> values;
  std::map<std::string, std::vector<RelTriple>> triples;
};

struct SamplerConfig {
  std::uint64_t seed = 20240601;
  std::size_t pointsPerDomain = 16;
  Interval domainBox{-4.0, 4.0};
  std::vector<double> radiusChain{0.0, 0.05, 0.25, 1.0, 2.5};
  CarrierMode carrierMode = CarrierMode::FullSpace;
  std::string corpusId = "default";
  /// Length of sampled chains used for residuals in function quantales.
  std::size_t chainLength = 8;
  /// Definable values; required in DefinableCorpus mode, optional otherwise.
  std::shared_ptr<const ValuePool> pool;

  /// Throws std::invalid_argument when pointsPerDomain < 2, the box is empty,
  /// or a radius is negative.
  void validate() const;
  Json toJson() const;
};

std::string toString(CarrierMode mode);

}  // namespace qqm
