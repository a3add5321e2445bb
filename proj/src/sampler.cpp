#include "qqm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qqm/functions.hpp"

namespace qqm {

double Rng::uniform(double lo, double hi) {
  double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index of empty range");
  return static_cast<std::size_t>(gen_() % n);
}

std::uint64_t streamSeed(std::uint64_t seed, const std::string& label) {
  // FNV-1a over the label, mixed with the seed.
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void SamplerConfig::validate() const {
  if (pointsPerDomain < 2) throw std::invalid_argument("pointsPerDomain must be at least 2");
  if (!(domainBox.lo <= domainBox.hi) || std::isinf(domainBox.lo) || std::isinf(domainBox.hi))
    throw std::invalid_argument("domain box must be a nonempty finite interval");
  for (double r : radiusChain)
    if (std::isnan(r) || r < 0) throw std::invalid_argument("radii must be nonnegative");
  if (carrierMode == CarrierMode::DefinableCorpus && !pool)
    throw std::invalid_argument("definable-corpus mode needs a value pool");
}

Json SamplerConfig::toJson() const {
  Json j;
  j["seed"] = seed;
  j["pointsPerDomain"] = pointsPerDomain;
  j["domainBox"] = {domainBox.lo, domainBox.hi};
  Json radii = Json::array();
  for (double r : radiusChain) radii.push_back(formatReal(r));
  j["radiusChain"] = radii;
  j["carrierMode"] = toString(carrierMode);
  j["corpusId"] = corpusId;
  j["chainLength"] = chainLength;
  return j;
}

std::string toString(CarrierMode mode) { return mode == CarrierMode::FullSpace ? "FullSpace" : "DefinableCorpus"; }

namespace {

bool isRealToReal(const SimpleType& t) { return t.isArrow() && t.dom().isReal() && t.cod().isReal(); }

const std::vector<SemValue>* poolValues(const SamplerConfig& cfg, const SimpleType& t) {
  if (!cfg.pool) return nullptr;
  auto it = cfg.pool->values.find(t.str());
  return it == cfg.pool->values.end() ? nullptr : &it->second;
}

const std::vector<RelTriple>* poolTriples(const SamplerConfig& cfg, const SimpleType& t) {
  if (!cfg.pool) return nullptr;
  auto it = cfg.pool->triples.find(t.str());
  return it == cfg.pool->triples.end() ? nullptr : &it->second;
}

std::vector<double> realPoints(const SamplerConfig& cfg, Rng& rng) {
  std::vector<double> xs{cfg.domainBox.lo, cfg.domainBox.hi};
  if (cfg.domainBox.lo <= 0 && 0 <= cfg.domainBox.hi) xs.push_back(0.0);
  while (xs.size() < cfg.pointsPerDomain) xs.push_back(rng.uniform(cfg.domainBox.lo, cfg.domainBox.hi));
  xs.resize(cfg.pointsPerDomain);
  return xs;
}

SemValue constantFunction(const SemValue& v) {
  return SemValue::function([v](const SemValue&) { return v; }, "const(" + v.str() + ")");
}

std::vector<SemValue> functionValues(const SimpleType& t, const SamplerConfig& cfg) {
  std::vector<SemValue> out;
  if (const auto* p = poolValues(cfg, t)) out = *p;
  if (cfg.carrierMode == CarrierMode::DefinableCorpus) return out;
  if (isRealToReal(t)) {
    for (const auto& n : libraryFunctionNames()) out.push_back(libraryFunction(n));
    return out;
  }
  auto cods = sampleValues(t.cod(), cfg);
  for (std::size_t i = 0; i < cods.size() && i < 4; ++i) out.push_back(constantFunction(cods[i]));
  if (t.dom() == t.cod()) out.push_back(SemValue::function([](const SemValue& v) { return v; }, "identity"));
  if (isRealToReal(t.dom()) && t.cod().isReal()) {
    for (double at : {0.0, 1.0}) {
      out.push_back(SemValue::function([at](const SemValue& h) { return h.apply(SemValue::real(at)); },
                                       "eval@" + formatReal(at)));
    }
  }
  return out;
}

}  // namespace

std::vector<SemValue> sampleValues(const SimpleType& type, const SamplerConfig& cfg) {
  Rng rng(streamSeed(cfg.seed, "values:" + type.str()));
  switch (type.kind()) {
    case SimpleType::Kind::Real: {
      std::vector<SemValue> out;
      for (double x : realPoints(cfg, rng)) out.push_back(SemValue::real(x));
      return out;
    }
    case SimpleType::Kind::Prod: {
      auto l = sampleValues(type.left(), cfg), r = sampleValues(type.right(), cfg);
      std::vector<SemValue> out;
      if (l.empty() || r.empty()) return out;
      std::size_t n = std::max(l.size(), r.size());
      for (std::size_t i = 0; i < n; ++i) out.push_back(SemValue::pair(l[i % l.size()], r[(i * 7 + 3) % r.size()]));
      return out;
    }
    case SimpleType::Kind::Arrow:
      return functionValues(type, cfg);
  }
  return {};
}

namespace {

// Pulls y toward x until |x - y| <= r holds in floating point.
double within(double x, double y, double r) {
  while (std::fabs(x - y) > r) y = std::nextafter(y, x);
  return y;
}

}  // namespace

std::vector<RelTriple> sampleTriples(const SimpleType& type, const SamplerConfig& cfg) {
  Rng rng(streamSeed(cfg.seed, "triples:" + type.str()));
  switch (type.kind()) {
    case SimpleType::Kind::Real: {
      std::vector<RelTriple> out;
      for (double x : realPoints(cfg, rng)) {
        for (double r : cfg.radiusChain) {
          auto rad = QuantaleValue::scalar(r);
          out.push_back({SemValue::real(x), rad, SemValue::real(within(x, x + r, r))});
          out.push_back({SemValue::real(x), rad, SemValue::real(within(x, x - rng.uniform(0.0, r), r))});
        }
        out.push_back(
            {SemValue::real(x), QuantaleValue::scalar(kInf), SemValue::real(rng.uniform(cfg.domainBox.lo, cfg.domainBox.hi))});
      }
      return out;
    }
    case SimpleType::Kind::Prod: {
      auto l = sampleTriples(type.left(), cfg), r = sampleTriples(type.right(), cfg);
      std::vector<RelTriple> out;
      if (l.empty() || r.empty()) return out;
      std::size_t n = std::min<std::size_t>(std::max(l.size(), r.size()), 4 * cfg.pointsPerDomain);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = l[rng.index(l.size())];
        const auto& b = r[rng.index(r.size())];
        out.push_back({SemValue::pair(a.left, b.left), QuantaleValue::pair(a.radius, b.radius),
                       SemValue::pair(a.right, b.right)});
      }
      return out;
    }
    case SimpleType::Kind::Arrow: {
      std::vector<RelTriple> out;
      if (const auto* p = poolTriples(cfg, type)) out = *p;
      if (isRealToReal(type)) {
        // Exact least radii between every pair of functions with range oracles.
        std::vector<SemValue> fs;
        for (const auto& f : functionValues(type, cfg))
          if (f.hasRange()) fs.push_back(f);
        for (const auto& f : fs)
          for (const auto& g : fs) out.push_back({f, exactArrowDistance(f, g), g});
      }
      return out;
    }
  }
  return {};
}

}  // namespace qqm
