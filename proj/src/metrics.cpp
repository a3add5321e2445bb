#include "qqm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qqm/parser.hpp"
#include "qqm/typecheck.hpp"

namespace qqm {

// ---------------------------------------------------------------- membership

Verdict member(const SimpleType& type, const SemValue& x, const QuantaleValue& a, const SemValue& y,
               const SamplerConfig& cfg) {
  switch (type.kind()) {
    case SimpleType::Kind::Real: {
      auto gap = QuantaleValue::scalar(std::fabs(x.asReal() - y.asReal()));
      Verdict v = leq(QuantaleDescriptor::lawvere(), a, gap);
      if (v.isRefuted())
        return Verdict::refuted({{"type", type.str()}, {"left", x.str()}, {"radius", a.str()}, {"right", y.str()}});
      return v;
    }
    case SimpleType::Kind::Prod: {
      Verdict v = member(type.left(), x.first(), a.first(), y.first(), cfg);
      if (v.isRefuted()) return v;
      v &= member(type.right(), x.second(), a.second(), y.second(), cfg);
      return v;
    }
    case SimpleType::Kind::Arrow: {
      auto triples = sampleTriples(type.dom(), cfg);
      Verdict total = Verdict::proved();
      for (const auto& tr : triples) {
        QuantaleValue c = a.apply(tr.left, tr.radius);
        SemValue fx = x.apply(tr.left);
        for (int clause = 0; clause < 2; ++clause) {
          SemValue other = clause == 0 ? y.apply(tr.right) : x.apply(tr.right);
          Verdict v = member(type.cod(), fx, c, other, cfg);
          if (v.isRefuted()) {
            return Verdict::refuted({{"type", type.str()},
                                     {"left", x.str()},
                                     {"radius", a.str()},
                                     {"right", y.str()},
                                     {"clause", clause == 0 ? "(fx, d(x,a), gy)" : "(fx, d(x,a), fy)"},
                                     {"x", tr.left.str()},
                                     {"a", tr.radius.str()},
                                     {"y", tr.right.str()},
                                     {"inner", v.witness}});
          }
          total &= v;
        }
      }
      return total.sampled(triples.size());
    }
  }
  return Verdict::refuted({{"error", "unknown type"}});
}

Verdict member(const MembershipQuery& q) { return member(q.type, q.left, q.radius, q.right, q.sampler); }

// ---------------------------------------------------------------- distances

Json DistanceEstimate::toJson() const {
  Json j{{"mode", mode}, {"resolution", resolution}, {"samples", samples}};
  if (value.isScalar())
    j["value"] = formatReal(value.asScalar());
  else
    j["value"] = value.str();
  return j;
}

namespace {

std::size_t leafCount(const SimpleType& t) {
  if (t.isReal()) return 1;
  if (t.isProd()) return leafCount(t.left()) + leafCount(t.right());
  return 0;
}

void flatten(const SemValue& v, std::vector<double>& out) {
  if (v.isReal()) {
    out.push_back(v.asReal());
  } else {
    flatten(v.first(), out);
    flatten(v.second(), out);
  }
}

void flattenRadius(const QuantaleValue& v, std::vector<double>& out) {
  if (v.isScalar()) {
    out.push_back(v.asScalar());
  } else {
    flattenRadius(v.first(), out);
    flattenRadius(v.second(), out);
  }
}

SemValue unflatten(const SimpleType& t, const std::vector<double>& xs, std::size_t& i) {
  if (t.isReal()) return SemValue::real(xs[i++]);
  SemValue l = unflatten(t.left(), xs, i);
  SemValue r = unflatten(t.right(), xs, i);
  return SemValue::pair(l, r);
}

// rho-hat at a ground type: componentwise absolute differences.
QuantaleValue groundDistance(const SimpleType& t, const SemValue& u, const SemValue& v) {
  if (t.isReal()) return QuantaleValue::scalar(std::fabs(u.asReal() - v.asReal()));
  return QuantaleValue::pair(groundDistance(t.left(), u.first(), v.first()),
                             groundDistance(t.right(), u.second(), v.second()));
}

}  // namespace

DistanceEstimate rhoHatArrow(const SimpleType& arrow, const SemValue& f, const SemValue& g, const SemValue& x,
                             const QuantaleValue& a, const SamplerConfig& cfg, const DistanceOptions& opts) {
  if (!arrow.isArrow()) throw std::invalid_argument("rhoHatArrow needs an arrow type, got " + arrow.str());
  const SimpleType& dom = arrow.dom();
  const SimpleType& cod = arrow.cod();
  auto qCod = quantaleOfType(cod);

  if (dom.isReal() && cod.isReal()) {
    double c = f(x.asReal());
    double r = a.asScalar();
    auto s1 = supDeviationOnDisk(c, g, x.asReal(), r, opts.grid, opts.forceGrid);
    auto s2 = supDeviationOnDisk(c, f, x.asReal(), r, opts.grid, opts.forceGrid);
    bool exact = s1.exact && s2.exact;
    return {QuantaleValue::scalar(std::max(s1.value, s2.value)), exact ? "exact" : "grid",
            std::max(s1.resolution, s2.resolution), 0};
  }

  std::size_t dims = leafCount(dom);
  if (dom.isGround() && cod.isGround() && dims <= 4) {
    std::vector<double> center, radii;
    flatten(x, center);
    flattenRadius(a, radii);
    std::size_t r = std::max<std::size_t>(opts.coarseResolution, 2);
    std::vector<std::size_t> idx(dims, 0);
    SemValue fx = f.apply(x);
    QuantaleValue best = unit(qCod);
    std::size_t count = 0;
    std::vector<double> ys(dims);
    while (true) {
      for (std::size_t i = 0; i < dims; ++i) {
        double rad = std::isinf(radii[i]) ? opts.grid.infiniteReach : radii[i];
        ys[i] = center[i] + rad * (-1.0 + 2.0 * static_cast<double>(idx[i]) / static_cast<double>(r - 1));
      }
      std::size_t k = 0;
      SemValue y = unflatten(dom, ys, k);
      best = meet(qCod, {best, groundDistance(cod, fx, g.apply(y)), groundDistance(cod, fx, f.apply(y))});
      ++count;
      std::size_t j = 0;
      while (j < dims && ++idx[j] == r) idx[j++] = 0;
      if (j == dims) break;
    }
    return {best, "grid", r, count};
  }

  // Higher types: meet over sampled candidates related to x at radius a.
  std::vector<SemValue> candidates{x};
  if (dom.isReal()) {
    double c = x.asReal(), rad = std::isinf(a.asScalar()) ? opts.grid.infiniteReach : a.asScalar();
    std::size_t r = std::max<std::size_t>(opts.coarseResolution, 2);
    for (std::size_t i = 0; i < r; ++i)
      candidates.push_back(SemValue::real(c + rad * (-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(r - 1))));
  } else {
    auto more = sampleValues(dom, cfg);
    candidates.insert(candidates.end(), more.begin(), more.end());
  }
  SemValue fx = f.apply(x);
  std::vector<QuantaleValue> parts;
  std::size_t kept = 0;
  for (const auto& y : candidates) {
    if (!dom.isReal() && member(dom, x, a, y, cfg).isRefuted()) continue;
    if (dom.isReal() && std::fabs(x.asReal() - y.asReal()) > a.asScalar()) continue;
    ++kept;
    parts.push_back(rhoHat(cod, fx, g.apply(y), cfg, opts));
    parts.push_back(rhoHat(cod, fx, f.apply(y), cfg, opts));
  }
  return {meet(qCod, parts), "sampled", 0, kept};
}

QuantaleValue rhoHat(const SimpleType& type, const SemValue& x, const SemValue& y, const SamplerConfig& cfg,
                     const DistanceOptions& opts) {
  switch (type.kind()) {
    case SimpleType::Kind::Real:
      return QuantaleValue::scalar(std::fabs(x.asReal() - y.asReal()));
    case SimpleType::Kind::Prod:
      return QuantaleValue::pair(rhoHat(type.left(), x.first(), y.first(), cfg, opts),
                                 rhoHat(type.right(), x.second(), y.second(), cfg, opts));
    case SimpleType::Kind::Arrow: {
      bool exact = type.dom().isReal() && type.cod().isReal() && x.hasRange() && y.hasRange() && !opts.forceGrid;
      return QuantaleValue::errFun(
          [type, x, y, cfg, opts](const SemValue& u, const QuantaleValue& a) {
            return rhoHatArrow(type, x, y, u, a, cfg, opts).value;
          },
          "dist(" + x.str() + "," + y.str() + ")", exact);
    }
  }
  throw std::logic_error("unknown type");
}

QuantaleValue selfDistance(const SimpleType& type, const SemValue& x, const SamplerConfig& cfg,
                           const DistanceOptions& opts) {
  return rhoHat(type, x, x, cfg, opts);
}

Verdict quantaleEqual(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b, double tol,
                      const SamplerConfig& cfg) {
  switch (q.shape()) {
    case QuantaleDescriptor::Shape::Lawvere: {
      double x = a.asScalar(), y = b.asScalar();
      bool same = (std::isinf(x) && std::isinf(y)) || std::fabs(x - y) <= tol;
      return same ? Verdict::proved() : Verdict::refuted({{"left", a.str()}, {"right", b.str()}});
    }
    case QuantaleDescriptor::Shape::Product: {
      Verdict v = quantaleEqual(q.left(), a.first(), b.first(), tol, cfg);
      if (v.isRefuted()) return v;
      v &= quantaleEqual(q.right(), a.second(), b.second(), tol, cfg);
      return v;
    }
    case QuantaleDescriptor::Shape::FunSpace: {
      Verdict total = Verdict::proved();
      auto probes = funSpaceProbes(q, cfg);
      for (const auto& [x, r] : probes) {
        Verdict v = quantaleEqual(q.outer(), a.apply(x, r), b.apply(x, r), tol, cfg);
        if (v.isRefuted()) return Verdict::refuted({{"x", x.str()}, {"a", r.str()}, {"inner", v.witness}});
        total &= v;
      }
      return total.sampled(probes.size());
    }
    default: {
      Verdict v = leq(q, a, b, cfg);
      if (v.isRefuted()) return v;
      v &= leq(q, b, a, cfg);
      return v;
    }
  }
}

Verdict checkSelfDistanceLemma(const SimpleType& arrow, const SemValue& f, const SamplerConfig& cfg, double tol,
                               const DistanceOptions& opts) {
  auto sigmaF = selfDistance(arrow, f, cfg, opts);
  auto qB = quantaleOfType(arrow.cod());
  Verdict total = Verdict::proved();
  auto xs = sampleValues(arrow.dom(), cfg);
  for (const auto& x : xs) {
    auto lhs = sigmaF.apply(x, selfDistance(arrow.dom(), x, cfg, opts));
    auto rhs = selfDistance(arrow.cod(), f.apply(x), cfg, opts);
    Verdict v = quantaleEqual(qB, lhs, rhs, tol, cfg);
    if (v.isRefuted())
      return Verdict::refuted({{"f", f.str()}, {"x", x.str()}, {"lhs", lhs.str()}, {"rhs", rhs.str()}, {"inner", v.witness}});
    total &= v;
  }
  return total.sampled(xs.size());
}

// ---------------------------------------------------------------- two-term bound

Json TwoTermBound::toJson() const {
  return {{"bound", formatReal(bound)},
          {"gap", formatReal(gap)},
          {"tBullet", formatReal(tBullet)},
          {"sBullet", formatReal(sBullet)},
          {"membership", qqm::toJson(membership)}};
}

TwoTermBound twoTermBound(const Semantics& sem, const Term& t, const Term& s, const SimpleType& dom,
                          const SemValue& x, const QuantaleValue& a, const SamplerConfig& cfg) {
  auto arrow = SimpleType::arrow(dom, SimpleType::real());
  for (const Term* term : {&t, &s}) {
    auto ty = typecheck({}, *term, sem.prims());
    if (ty != arrow) throw std::invalid_argument("term " + term->str() + " has type " + ty.str() + ", expected " + arrow.str());
  }
  SemValue tv = sem.evalClosed(t), sv = sem.evalClosed(s);
  QuantaleValue td = sem.deriveClosed(t), sd = sem.deriveClosed(s);
  TwoTermBound out;
  out.gap = std::fabs(tv.apply(x).asReal() - sv.apply(x).asReal());
  out.tBullet = td.apply(x, a).asScalar();
  out.sBullet = sd.apply(x, a).asScalar();
  out.bound = std::max(out.gap + out.sBullet, out.tBullet);
  auto d = QuantaleValue::errFun(
      [tv, sv, td, sd](const SemValue& u, const QuantaleValue& r) {
        double gap = std::fabs(tv.apply(u).asReal() - sv.apply(u).asReal());
        return QuantaleValue::scalar(std::max(gap + sd.apply(u, r).asScalar(), td.apply(u, r).asScalar()));
      },
      "twoTermBound");
  out.membership = member(arrow, tv, d, sv, cfg);
  return out;
}

// ---------------------------------------------------------------- finite difference example

Json BoundReplay::toJson() const {
  return {{"epsilon", formatReal(epsilon)},       {"radius", formatReal(radius)},
          {"bound", formatReal(bound)},           {"actual", formatReal(actual)},
          {"derivative", formatReal(derivative)}, {"derivativeFormula", formatReal(derivativeFormula)},
          {"resolution", resolution},             {"holds", holds}};
}

BoundReplay exampleBoundReplay(double epsilon, double radius, std::size_t resolution) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (!(radius >= 0)) throw std::invalid_argument("radius must be nonnegative");
  Semantics sem(PrimitiveTable::defaults(epsilon));
  TypingContext ctx({{"f", SimpleType::arrow(SimpleType::real(), SimpleType::real())}, {"x", SimpleType::real()}});
  Term body = elaborate(ctx, parseTerm("let y be add(x) in diff(f y, f x)"), sem.prims());
  SemValue id = libraryFunction("id"), sine = libraryFunction("sin");
  auto F = [&](const SemValue& h, double x) { return sem.eval(ctx, body, {h, SemValue::real(x)}).asReal(); };

  BoundReplay out;
  out.epsilon = epsilon;
  out.radius = radius;
  out.actual = std::fabs(F(id, 0.0) - F(sine, radius));

  double sup = 0.0;
  std::size_t n = std::max<std::size_t>(resolution, 2);
  for (std::size_t i = 0; i < n; ++i) {
    double y = radius == 0 ? 0.0 : -radius + 2 * radius * static_cast<double>(i) / static_cast<double>(n - 1);
    sup = std::max(sup, std::fabs(1 - (std::sin(y + epsilon) - std::sin(y)) / epsilon));
  }
  out.bound = std::max(radius / epsilon, sup);
  out.resolution = n;

  auto d = exactArrowDistance(id, sine);
  out.derivative = sem.derive(ctx, body, {id, SemValue::real(0.0)}, {d, QuantaleValue::scalar(radius)}).asScalar();
  out.derivativeFormula = (d(epsilon, radius) + d(0.0, radius)) / epsilon;
  out.holds = out.actual <= out.bound && out.actual <= out.derivative + 1e-9;
  return out;
}

// ---------------------------------------------------------------- no greatest relation

Json NoGreatestReport::toJson() const {
  return {{"definableFunctions", definableFunctions},
          {"classification", classification},
          {"candidates", candidates},
          {"survivors", survivors},
          {"D", dTable},
          {"ODZ_in_delta", qqm::toJson(ODZMembership)},
          {"JO", formatReal(JO)},
          {"JZ", formatReal(JZ)},
          {"sigmaJ_OD", formatReal(sigmaJOD)},
          {"violatedMembership",
           {{"triple", {formatReal(JO), formatReal(sigmaJOD), formatReal(JZ)}}, {"relation", "delta_Real"},
            {"verdict", qqm::toJson(violated)}}}};
}

NoGreatestReport replayNoGreatestCounterexample(const PrimitiveTable& prims, const SamplerConfig& cfg) {
  if (!prims.empty())
    throw std::invalid_argument("the no-greatest replay requires an empty primitive table (got " +
                                std::to_string(prims.size()) + " primitives)");
  Semantics sem(prims);
  const auto R = SimpleType::real();
  const auto RR = SimpleType::arrow(R, R);
  const auto RRR = SimpleType::arrow(RR, R);
  NoGreatestReport rep;

  // Closed terms of type Real => Real without primitives denote constants or
  // the identity; spot-check a few on probes.
  rep.classification = Json::array();
  for (const char* src : {"\\x:Real. x", "\\x:Real. 2.5", "\\x:Real. fst(<x, 1.0>)", "\\x:Real. snd(<x, -1.0>)",
                          "(\\g:Real -> Real. \\x:Real. g (g x)) (\\z:Real. z)", "\\x:Real. (\\y:Real. 7.0) x"}) {
    Term t = parseTerm(src);
    typecheck({}, t, prims);
    SemValue v = sem.evalClosed(t);
    bool constant = true, identity = true;
    double first = v(-3.0);
    for (double p : {-3.0, -0.5, 0.0, 1.0, 4.25}) {
      constant = constant && v(p) == first;
      identity = identity && v(p) == p;
    }
    rep.classification.push_back({{"term", t.str()}, {"class", identity ? "identity" : constant ? "constant" : "other"}});
  }

  // The definable corpus at Real => Real.
  auto pool = std::make_shared<ValuePool>();
  std::set<std::string> definable;
  for (const char* n : {"id", "const:-2", "const:-1", "const:0", "const:0.5", "const:1", "const:3"}) {
    pool->values[RR.str()].push_back(libraryFunction(n));
    definable.insert(n);
    rep.definableFunctions.push_back(n);
  }
  SamplerConfig delta = cfg;
  delta.carrierMode = CarrierMode::DefinableCorpus;
  delta.pool = pool;
  SamplerConfig full = cfg;
  full.carrierMode = CarrierMode::FullSpace;
  full.pool = pool;

  SemValue O = sem.evalClosed(parseTerm("\\f:Real -> Real. 0.0"));
  SemValue Z = sem.evalClosed(parseTerm("\\f:Real -> Real. f 0.0"));
  Term jTerm = parseTerm("\\F:(Real -> Real) -> Real. F (\\x:Real. 1.0)");
  typecheck({}, jTerm, prims);
  SemValue J = sem.evalClosed(jTerm);

  // D(f, d): meet (numeric supremum) of |g(0)| over definable g with
  // (f, d, g) in delta; the empty meet (non-definable f) is 0.
  const auto& defs = pool->values[RR.str()];
  auto D = QuantaleValue::errFun(
      [defs, definable, delta, RR](const SemValue& f, const QuantaleValue& d) {
        double best = 0.0;
        if (!definable.count(f.label())) return QuantaleValue::scalar(best);
        for (const auto& g : defs)
          if (member(RR, f, d, g, delta).ok()) best = std::max(best, std::fabs(g(0.0)));
        return QuantaleValue::scalar(best);
      },
      "D");

  rep.dTable = Json::array();
  for (const char* fn : {"id", "const:1", "twice"}) {
    for (const char* gn : {"id", "const:0"}) {
      SemValue f = libraryFunction(fn), g = libraryFunction(gn);
      auto d = exactArrowDistance(f, g);
      rep.dTable.push_back({{"f", fn}, {"d", std::string("dist(") + fn + "," + gn + ")"}, {"D", formatReal(D.apply(f, d).asScalar())}});
    }
  }

  rep.ODZMembership = member(RRR, O, D, Z, delta);

  struct Candidate {
    std::string name;
    SemValue F;
  };
  std::vector<Candidate> cands = {
      {"O", O},
      {"Z", Z},
      {"eval@1", SemValue::function([](const SemValue& h) { return h.apply(SemValue::real(1.0)); }, "eval@1")},
      {"const1", SemValue::function([](const SemValue&) { return SemValue::real(1.0); }, "const1")},
      {"cancel", SemValue::function(
                     [](const SemValue& h) { return SemValue::real(h(0.0) - h(0.0)); }, "cancel")},
  };
  rep.candidates = Json::array();
  std::vector<SemValue> survivors;
  for (const auto& c : cands) {
    Verdict v = member(RRR, O, D, c.F, full);
    Json probes = Json::object();
    for (const char* p : {"id", "sin", "const:1"}) probes[p] = formatReal(c.F.apply(libraryFunction(p)).asReal());
    rep.candidates.push_back({{"name", c.name}, {"membership", qqm::toJson(v)}, {"values", probes}});
    if (v.ok()) {
      rep.survivors.push_back(c.name);
      survivors.push_back(c.F);
    }
  }

  rep.JO = J.apply(O).asReal();
  rep.JZ = J.apply(Z).asReal();
  double sigma = 0.0;
  for (const auto& F : survivors) sigma = std::max({sigma, std::fabs(rep.JO - J.apply(F).asReal()), 0.0});
  rep.sigmaJOD = sigma;
  rep.violated = member(R, SemValue::real(rep.JO), QuantaleValue::scalar(rep.sigmaJOD), SemValue::real(rep.JZ), delta);
  return rep;
}

}  // namespace qqm
