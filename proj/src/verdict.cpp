#include "qqm/verdict.hpp"

namespace qqm {

Verdict& Verdict::operator&=(const Verdict& other) {
  if (kind == VerdictKind::Refuted) return *this;
  if (other.kind == VerdictKind::Refuted) {
    *this = other;
    return *this;
  }
  if (other.kind == VerdictKind::SampledOk) kind = VerdictKind::SampledOk;
  samples += other.samples;
  return *this;
}

Verdict Verdict::sampled(std::size_t n) const {
  if (kind == VerdictKind::Refuted) return *this;
  return Verdict{VerdictKind::SampledOk, samples + n, nullptr};
}

std::string toString(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Proved:
      return "Proved";
    case VerdictKind::SampledOk:
      return "SampledOk";
    case VerdictKind::Refuted:
      return "Refuted";
  }
  return "?";
}

Json toJson(const Verdict& v) {
  Json j;
  j["verdict"] = toString(v.kind);
  j["samples"] = v.samples;
  if (v.isRefuted()) j["witness"] = v.witness;
  return j;
}

void CheckReport::add(std::string name, Verdict v, Json details) {
  entries.push_back({std::move(name), std::move(v), std::move(details)});
}

Verdict CheckReport::overall() const {
  Verdict v = Verdict::proved();
  for (const auto& e : entries) v &= e.verdict;
  return v;
}

const CheckReport::Entry* CheckReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

Json CheckReport::toJson() const {
  Json checks = Json::array();
  for (const auto& e : entries) {
    Json j = qqm::toJson(e.verdict);
    j["name"] = e.name;
    if (!e.details.is_null()) j["details"] = e.details;
    checks.push_back(j);
  }
  return {{"checks", checks}, {"overall", qqm::toJson(overall())}};
}

}  // namespace qqm
