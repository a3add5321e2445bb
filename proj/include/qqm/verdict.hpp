#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace qqm {

using Json = nlohmann::json;

enum class VerdictKind { Proved, SampledOk, Refuted };

/// Three-valued check outcome. Refuted verdicts carry the failing instance;
/// SampledOk verdicts record how many sample points were inspected.
struct Verdict {
  VerdictKind kind = VerdictKind::Proved;
  std::size_t samples = 0;
  Json witness;

  static Verdict proved() { return {}; }
  static Verdict sampledOk(std::size_t n) { return {VerdictKind::SampledOk, n, nullptr}; }
  static Verdict refuted(Json witness) { return {VerdictKind::Refuted, 0, std::move(witness)}; }

  bool ok() const { return kind != VerdictKind::Refuted; }
  bool isProved() const { return kind == VerdictKind::Proved; }
  bool isRefuted() const { return kind == VerdictKind::Refuted; }

  /// Conjunction: Refuted wins, then SampledOk, then Proved. Sample counts add.
  Verdict& operator&=(const Verdict& other);
  /// Marks a Proved verdict as sampled (used when a check ran on samples).
  Verdict sampled(std::size_t n) const;
};

std::string toString(VerdictKind kind);
Json toJson(const Verdict& v);

/// A list of named checks; the overall verdict is their conjunction.
struct CheckReport {
  struct Entry {
    std::string name;
    Verdict verdict;
    Json details;
  };
  std::vector<Entry> entries;

  void add(std::string name, Verdict v, Json details = nullptr);
  Verdict overall() const;
  const Entry* find(const std::string& name) const;
  Json toJson() const;
};

}  // namespace qqm
