#include "qqm/workbench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

namespace qqm {

std::string toString(Axiom a) {
  switch (a) {
    case Axiom::Reflexive: return "Reflexive";
    case Axiom::QuasiReflexive: return "QuasiReflexive";
    case Axiom::Transitive: return "Transitive";
    case Axiom::LST: return "LST";
    case Axiom::ST1: return "ST1";
    case Axiom::ST2: return "ST2";
    case Axiom::ST3: return "ST3";
    case Axiom::ST4: return "ST4";
    case Axiom::SelfIndistancy: return "SelfIndistancy";
    case Axiom::WeakSymmetry: return "WeakSymmetry";
  }
  return "?";
}

const std::vector<Axiom>& allAxioms() {
  static const std::vector<Axiom> all{Axiom::Reflexive, Axiom::QuasiReflexive, Axiom::Transitive, Axiom::LST,
                                      Axiom::ST1,       Axiom::ST2,            Axiom::ST3,        Axiom::ST4,
                                      Axiom::SelfIndistancy, Axiom::WeakSymmetry};
  return all;
}

Axiom axiomFromString(const std::string& s) {
  for (Axiom a : allAxioms())
    if (toString(a) == s) return a;
  throw std::invalid_argument("unknown axiom: " + s);
}

Json toJson(const AxiomReport& r) {
  Json j = Json::object();
  for (const auto& [a, res] : r) {
    Json e{{"holds", res.holds}, {"failures", res.failures}};
    if (!res.holds) e["witness"] = res.witness;
    j[toString(a)] = e;
  }
  return j;
}

Json WorkbenchCaps::toJson() const {
  return {{"carrier", carrier}, {"quantale", quantale}, {"expCarrier", expCarrier},
          {"expQuantale", expQuantale}, {"morphisms", morphisms}, {"pairs", pairs}};
}

Json RelationTable::toJson() const {
  Json rel = Json::object();
  for (std::size_t x = 0; x < size(); ++x)
    for (std::size_t y = 0; y < size(); ++y) rel[carrier[x]][carrier[y]] = q->name(at(x, y));
  return {{"carrier", carrier}, {"relation", rel}};
}

// ---------------------------------------------------------------- relational checks

namespace {

struct FiniteOps {
  const FiniteQuantale& q;
  using T = std::size_t;
  bool leq(T a, T b) const { return q.leq(a, b); }
  T tensor(T a, T b) const { return q.tensor(a, b); }
  T residual(T a, T b) const { return q.residual(a, b); }
  T top() const { return q.top(); }
  Json name(T a) const { return q.name(a); }
};

struct LawvereOps {
  using T = double;
  bool leq(T a, T b) const { return a >= b; }
  T tensor(T a, T b) const { return a + b; }
  T residual(T a, T b) const {
    if (std::isinf(a)) return 0.0;
    if (std::isinf(b)) return kInf;
    return std::max(b - a, 0.0);
  }
  T top() const { return 0.0; }
  Json name(T a) const { return formatReal(a); }
};

template <class Ops, class Phi>
void relationalAxioms(std::size_t n, const Phi& phi, const Ops& ops, const std::vector<std::string>& labels,
                      const std::vector<Axiom>& which, AxiomReport& out) {
  auto lbl = [&](std::size_t i) { return labels.empty() ? Json(i) : Json(labels[i]); };
  auto fail = [&](Axiom ax, Json w) {
    auto& r = out[ax];
    if (r.holds) r.witness = std::move(w);
    r.holds = false;
    ++r.failures;
  };
  for (Axiom ax : which) {
    out[ax];
    switch (ax) {
      case Axiom::Reflexive:
        for (std::size_t x = 0; x < n; ++x)
          if (!ops.leq(ops.top(), phi(x, x))) fail(ax, {{"x", lbl(x)}, {"phi_xx", ops.name(phi(x, x))}});
        break;
      case Axiom::QuasiReflexive:
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            if (!ops.leq(phi(x, y), phi(x, x)))
              fail(ax, {{"x", lbl(x)}, {"y", lbl(y)}, {"phi_xy", ops.name(phi(x, y))}, {"phi_xx", ops.name(phi(x, x))}});
        break;
      case Axiom::SelfIndistancy:
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            if (x != y && ops.leq(phi(x, x), phi(x, y)))
              fail(ax, {{"x", lbl(x)}, {"y", lbl(y)}, {"sigma_x", ops.name(phi(x, x))}, {"phi_xy", ops.name(phi(x, y))}});
        break;
      case Axiom::WeakSymmetry:
        throw std::invalid_argument("WeakSymmetry needs the predicate form");
      default: {
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
              auto xy = phi(x, y), yz = phi(y, z), xz = phi(x, z), yy = phi(y, y);
              typename Ops::T lhs{}, rhs = xz;
              switch (ax) {
                case Axiom::Transitive: lhs = ops.tensor(xy, yz); break;
                case Axiom::ST1: lhs = ops.tensor(xy, yz); rhs = ops.tensor(xz, yy); break;
                case Axiom::ST2: lhs = ops.tensor(xy, ops.residual(yy, yz)); break;
                case Axiom::ST3: lhs = ops.residual(yy, ops.tensor(xy, yz)); break;
                case Axiom::ST4:
                  lhs = ops.tensor(ops.tensor(ops.residual(yy, xy), yy), ops.residual(yy, yz));
                  break;
                case Axiom::LST: lhs = ops.tensor(ops.residual(yy, xy), yz); break;
                default: break;
              }
              if (!ops.leq(lhs, rhs))
                fail(ax, {{"x", lbl(x)}, {"y", lbl(y)}, {"z", lbl(z)},
                          {"lhs", ops.name(lhs)}, {"rhs", ops.name(rhs)},
                          {"phi_xy", ops.name(xy)}, {"phi_yz", ops.name(yz)},
                          {"phi_xz", ops.name(xz)}, {"phi_yy", ops.name(yy)}});
            }
      }
    }
  }
}

}  // namespace

AxiomReport checkLawvereRelation(std::size_t n, const std::vector<double>& phi, const std::vector<Axiom>& which) {
  if (phi.size() != n * n) throw std::invalid_argument("relation table must have n * n entries");
  AxiomReport out;
  relationalAxioms(n, [&](std::size_t x, std::size_t y) { return phi[x * n + y]; }, LawvereOps{}, {}, which, out);
  return out;
}

// ---------------------------------------------------------------- spaces

FiniteQqmSpace::FiniteQqmSpace(std::vector<std::string> carrier, FiniteQuantalePtr q, std::vector<char> predicate,
                               bool raw)
    : carrier_(std::move(carrier)), q_(std::move(q)), pred_(std::move(predicate)), raw_(raw) {
  if (!q_) throw std::invalid_argument("space needs a quantale");
  if (carrier_.empty()) throw std::invalid_argument("space needs a nonempty carrier");
  if (std::set<std::string>(carrier_.begin(), carrier_.end()).size() != carrier_.size())
    throw std::invalid_argument("carrier labels are not distinct");
  if (pred_.size() != carrier_.size() * carrier_.size() * q_->size())
    throw std::invalid_argument("predicate table has the wrong size");
  if (raw_) return;
  if (auto bad = closureFailure()) throw std::invalid_argument("predicate is not closed: " + *bad);
  auto rep = checkAxioms(*this, {Axiom::QuasiReflexive, Axiom::Transitive});
  for (const auto& [ax, r] : rep)
    if (!r.holds) throw std::invalid_argument("predicate is not " + toString(ax) + ": " + r.witness.dump());
}

std::size_t FiniteQqmSpace::index(const std::string& label) const {
  auto it = std::find(carrier_.begin(), carrier_.end(), label);
  if (it == carrier_.end()) throw std::invalid_argument("unknown carrier element: " + label);
  return static_cast<std::size_t>(it - carrier_.begin());
}

std::size_t FiniteQqmSpace::hat(std::size_t x, std::size_t y) const {
  std::size_t j = q_->bottom();
  for (std::size_t a = 0; a < q_->size(); ++a)
    if (contains(x, a, y)) j = q_->join(j, a);
  return j;
}

RelationTable FiniteQqmSpace::relation() const {
  RelationTable t{carrier_, q_, {}};
  for (std::size_t x = 0; x < size(); ++x)
    for (std::size_t y = 0; y < size(); ++y) t.values.push_back(hat(x, y));
  return t;
}

std::optional<std::string> FiniteQqmSpace::closureFailure() const {
  const std::size_t m = q_->size();
  for (std::size_t x = 0; x < size(); ++x)
    for (std::size_t y = 0; y < size(); ++y) {
      std::string at = " at (" + label(x) + ", " + label(y) + ")";
      if (!contains(x, q_->bottom(), y)) return "empty join (bottom) missing" + at;
      for (std::size_t a = 0; a < m; ++a) {
        if (!contains(x, a, y)) continue;
        for (std::size_t b = 0; b < m; ++b) {
          if (q_->leq(b, a) && !contains(x, b, y))
            return "not downward closed: " + q_->name(a) + " present, " + q_->name(b) + " missing" + at;
          if (contains(x, b, y) && !contains(x, q_->join(a, b), y))
            return "not closed under joins: " + q_->name(a) + " and " + q_->name(b) + at;
        }
      }
    }
  return std::nullopt;
}

FiniteQqmSpace FiniteQqmSpace::fromRelation(const RelationTable& phi, bool raw) {
  const std::size_t n = phi.size(), m = phi.q->size();
  if (phi.values.size() != n * n) throw std::invalid_argument("relation table must have n * n entries");
  std::vector<char> pred(n * n * m, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t a = 0; a < m; ++a) pred[(x * n + y) * m + a] = phi.q->leq(a, phi.at(x, y));
  return FiniteQqmSpace(phi.carrier, phi.q, std::move(pred), raw);
}

FiniteQqmSpace FiniteQqmSpace::fromJson(const Json& j) {
  auto q = FiniteQuantale::fromJson(j.at("quantale"));
  auto carrier = j.at("carrier").get<std::vector<std::string>>();
  bool raw = j.value("raw", false);
  const std::size_t n = carrier.size(), m = q->size();
  auto idx = [&](const std::string& s) {
    auto it = std::find(carrier.begin(), carrier.end(), s);
    if (it == carrier.end()) throw std::invalid_argument("unknown carrier element: " + s);
    return static_cast<std::size_t>(it - carrier.begin());
  };
  if (j.contains("relation")) {
    RelationTable t{carrier, q, std::vector<std::size_t>(n * n, q->bottom())};
    for (const auto& [x, row] : j.at("relation").items())
      for (const auto& [y, v] : row.items()) t.values[idx(x) * n + idx(y)] = q->at(v.get<std::string>());
    return fromRelation(t, raw);
  }
  std::vector<char> pred(n * n * m, 0);
  for (const auto& tr : j.at("predicate")) pred[(idx(tr.at(0)) * n + idx(tr.at(2))) * m + q->at(tr.at(1))] = 1;
  return FiniteQqmSpace(carrier, q, std::move(pred), raw);
}

FiniteQqmSpace FiniteQqmSpace::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open space file: " + path);
  return fromJson(Json::parse(in));
}

Json FiniteQqmSpace::toJson() const {
  Json j{{"carrier", carrier_}, {"quantale", q_->toJson()}, {"raw", raw_}};
  if (!closureFailure()) {
    j["relation"] = relation().toJson()["relation"];
  } else {
    Json p = Json::array();
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t y = 0; y < size(); ++y)
        for (std::size_t a = 0; a < q_->size(); ++a)
          if (contains(x, a, y)) p.push_back({label(x), q_->name(a), label(y)});
    j["predicate"] = p;
  }
  return j;
}

// ---------------------------------------------------------------- axioms

AxiomReport checkAxioms(const FiniteQqmSpace& s, const std::vector<Axiom>& which) {
  const FiniteQuantale& q = s.q();
  const std::size_t n = s.size(), m = q.size();
  auto phi = s.relation();
  AxiomReport out;
  auto fail = [&](Axiom ax, Json w) {
    auto& r = out[ax];
    if (r.holds) r.witness = std::move(w);
    r.holds = false;
    ++r.failures;
  };
  auto L = [&](std::size_t x) { return s.label(x); };
  auto N = [&](std::size_t a) { return q.name(a); };
  std::vector<Axiom> relational;
  for (Axiom ax : which) {
    out[ax];
    switch (ax) {
      case Axiom::ST1:
      case Axiom::ST2:
      case Axiom::ST3:
      case Axiom::ST4:
        relational.push_back(ax);
        break;
      case Axiom::Reflexive:
        for (std::size_t x = 0; x < n; ++x)
          if (!s.contains(x, q.top(), x)) fail(ax, {{"x", L(x)}, {"radius", N(q.top())}});
        break;
      case Axiom::QuasiReflexive:
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t a = 0; a < m; ++a)
              if (s.contains(x, a, y) && !s.contains(x, a, x)) fail(ax, {{"x", L(x)}, {"a", N(a)}, {"y", L(y)}});
        break;
      case Axiom::Transitive:
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t a = 0; a < m; ++a) {
              if (!s.contains(x, a, y)) continue;
              for (std::size_t z = 0; z < n; ++z)
                for (std::size_t b = 0; b < m; ++b)
                  if (s.contains(y, b, z) && !s.contains(x, q.tensor(a, b), z))
                    fail(ax, {{"x", L(x)}, {"a", N(a)}, {"y", L(y)}, {"b", N(b)}, {"z", L(z)}});
            }
        break;
      case Axiom::LST:
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t a = 0; a < m; ++a) {
              if (!s.contains(x, q.tensor(a, phi.at(y, y)), y)) continue;
              for (std::size_t z = 0; z < n; ++z)
                for (std::size_t b = 0; b < m; ++b)
                  if (s.contains(y, b, z) && !s.contains(x, q.tensor(a, b), z))
                    fail(ax, {{"x", L(x)}, {"a", N(a)}, {"y", L(y)}, {"b", N(b)}, {"z", L(z)},
                              {"sigma_y", N(phi.at(y, y))}});
            }
        break;
      case Axiom::SelfIndistancy:
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            if (x != y && s.contains(x, phi.at(x, x), y))
              fail(ax, {{"x", L(x)}, {"y", L(y)}, {"sigma_x", N(phi.at(x, x))}});
        break;
      case Axiom::WeakSymmetry: {
        std::set<std::size_t> sigmas;
        for (std::size_t w = 0; w < n; ++w) sigmas.insert(phi.at(w, w));
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t a = 0; a < m; ++a) {
              std::optional<std::size_t> sw;
              for (std::size_t sg : sigmas)
                if (s.contains(x, q.tensor(a, sg), y)) {
                  sw = sg;
                  break;
                }
              if (!sw) continue;
              for (std::size_t z = 0; z < n; ++z)
                for (std::size_t b = 0; b < m; ++b) {
                  std::size_t ab = q.tensor(a, b);
                  if (s.contains(x, b, z) && q.leq(ab, phi.at(y, y)) && !s.contains(y, ab, z))
                    fail(ax, {{"x", L(x)}, {"y", L(y)}, {"z", L(z)}, {"a", N(a)}, {"b", N(b)},
                              {"sigma_w", N(*sw)}, {"sigma_y", N(phi.at(y, y))}});
                }
            }
        break;
      }
    }
  }
  if (!relational.empty())
    relationalAxioms(n, [&](std::size_t x, std::size_t y) { return phi.at(x, y); }, FiniteOps{q}, s.labels(),
                     relational, out);
  return out;
}

AxiomResult checkSymmetryCorollary(const FiniteQqmSpace& s) {
  const FiniteQuantale& q = s.q();
  AxiomResult r;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y)
      for (std::size_t z = 0; z < s.size(); ++z)
        for (std::size_t a = 0; a < q.size(); ++a) {
          std::size_t ax = q.tensor(a, s.sigma(x));
          if (s.contains(x, q.tensor(a, s.sigma(z)), y) && q.leq(ax, s.sigma(y)) && !s.contains(y, ax, x)) {
            if (r.holds)
              r.witness = {{"x", s.label(x)}, {"y", s.label(y)}, {"z", s.label(z)}, {"a", q.name(a)}};
            r.holds = false;
            ++r.failures;
          }
        }
  return r;
}

AxiomResult checkIndistancyCorollary(const FiniteQqmSpace& s) {
  AxiomResult r;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y)
      if (x != y && s.contains(x, s.sigma(y), y)) {
        if (r.holds) r.witness = {{"x", s.label(x)}, {"y", s.label(y)}, {"sigma_y", s.q().name(s.sigma(y))}};
        r.holds = false;
        ++r.failures;
      }
  return r;
}

// ---------------------------------------------------------------- relations

RelationTable hatAndCheck(const FiniteQqmSpace& space) {
  if (auto bad = space.closureFailure()) throw std::invalid_argument("hat needs a closed predicate: " + *bad);
  return space.relation();
}

FiniteQqmSpace predicateOf(const RelationTable& phi) {
  AxiomReport rep;
  relationalAxioms(phi.size(), [&](std::size_t x, std::size_t y) { return phi.at(x, y); }, FiniteOps{*phi.q},
                   phi.carrier, {Axiom::QuasiReflexive, Axiom::Transitive}, rep);
  bool qqm = rep[Axiom::QuasiReflexive].holds && rep[Axiom::Transitive].holds;
  return FiniteQqmSpace::fromRelation(phi, !qqm);
}

RelationTable observational(const RelationTable& phi, Side side) {
  const FiniteQuantale& q = *phi.q;
  const std::size_t n = phi.size();
  RelationTable out{phi.carrier, phi.q, std::vector<std::size_t>(n * n)};
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      std::size_t v = q.top();
      for (std::size_t z = 0; z < n; ++z)
        v = q.meet(v, side == Side::Left ? q.residual(phi.at(y, z), phi.at(x, z))
                                         : q.residual(phi.at(z, x), phi.at(z, y)));
      out.values[x * n + y] = v;
    }
  return out;
}

Json LstCharacterization::toJson() const {
  Json j{{"LST", lst}, {"phi_l_eq_yy_residual", yyCandidate}, {"phi_l_eq_xx_residual", xxCandidate}};
  if (!yyCandidate) j["witness_yy"] = witnessYY;
  if (!xxCandidate) j["witness_xx"] = witnessXX;
  return j;
}

LstCharacterization lstCharacterization(const RelationTable& phi) {
  const FiniteQuantale& q = *phi.q;
  const std::size_t n = phi.size();
  LstCharacterization c;
  AxiomReport rep;
  relationalAxioms(n, [&](std::size_t x, std::size_t y) { return phi.at(x, y); }, FiniteOps{q}, phi.carrier,
                   {Axiom::LST}, rep);
  c.lst = rep[Axiom::LST].holds;
  auto l = observational(phi, Side::Left);
  c.yyCandidate = c.xxCandidate = true;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      std::size_t yy = q.residual(phi.at(y, y), phi.at(x, y));
      std::size_t xx = q.residual(phi.at(x, x), phi.at(x, y));
      Json w{{"x", phi.carrier[x]}, {"y", phi.carrier[y]}, {"phi_l", q.name(l.at(x, y))}};
      if (c.yyCandidate && l.at(x, y) != yy) {
        c.yyCandidate = false;
        c.witnessYY = w;
        c.witnessYY["candidate"] = q.name(yy);
      }
      if (c.xxCandidate && l.at(x, y) != xx) {
        c.xxCandidate = false;
        c.witnessXX = w;
        c.witnessXX["candidate"] = q.name(xx);
      }
    }
  return c;
}

// ---------------------------------------------------------------- morphisms

Json FiniteMorphism::toJson(const FiniteQqmSpace& A, const FiniteQqmSpace& B) const {
  Json fj = Json::object(), gj = Json::object(), dj = Json::object();
  const std::size_t m = A.q().size();
  for (std::size_t x = 0; x < A.size(); ++x) {
    fj[A.label(x)] = B.label(f[x]);
    gj[A.label(x)] = B.label(g[x]);
    for (std::size_t a = 0; a < m; ++a) dj[A.label(x)][A.q().name(a)] = B.q().name(d[x * m + a]);
  }
  return {{"f", fj}, {"d", dj}, {"g", gj}};
}

Verdict isMorphism(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteMorphism& m) {
  const std::size_t qa = A.q().size();
  if (m.f.size() != A.size() || m.g.size() != A.size() || m.d.size() != A.size() * qa)
    return Verdict::refuted({{"error", "morphism tables have the wrong size"}});
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t a = 0; a < qa; ++a)
      for (std::size_t b = 0; b < qa; ++b)
        if (A.q().leq(a, b) && !B.q().leq(m.d[x * qa + a], m.d[x * qa + b]))
          return Verdict::refuted({{"error", "d not monotone"}, {"x", A.label(x)}, {"a", A.q().name(a)}, {"b", A.q().name(b)}});
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t a = 0; a < qa; ++a)
      for (std::size_t y = 0; y < A.size(); ++y) {
        if (!A.contains(x, a, y)) continue;
        std::size_t e = m.d[x * qa + a];
        if (!B.contains(m.f[x], e, m.g[y]))
          return Verdict::refuted({{"clause", "(fx, d(x,a), gy)"}, {"x", A.label(x)}, {"a", A.q().name(a)}, {"y", A.label(y)}});
        if (!B.contains(m.f[x], e, m.f[y]))
          return Verdict::refuted({{"clause", "(fx, d(x,a), fy)"}, {"x", A.label(x)}, {"a", A.q().name(a)}, {"y", A.label(y)}});
      }
  return Verdict::proved();
}

FiniteMorphism identityMorphism(const FiniteQqmSpace& A) {
  FiniteMorphism m;
  const std::size_t qa = A.q().size();
  for (std::size_t x = 0; x < A.size(); ++x) {
    m.f.push_back(x);
    m.g.push_back(x);
    for (std::size_t a = 0; a < qa; ++a) m.d.push_back(a);
  }
  return m;
}

FiniteMorphism compose(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteMorphism& m1,
                       const FiniteMorphism& m2) {
  const std::size_t qa = A.q().size(), qb = B.q().size();
  FiniteMorphism c;
  for (std::size_t x = 0; x < A.size(); ++x) {
    c.f.push_back(m2.f[m1.f[x]]);
    c.g.push_back(m2.g[m1.g[x]]);
    for (std::size_t a = 0; a < qa; ++a) c.d.push_back(m2.d[m1.f[x] * qb + m1.d[x * qa + a]]);
  }
  return c;
}

namespace {

// All monotone maps from the poset of `from` to the elements of `to`.
std::vector<std::vector<std::size_t>> monotoneMaps(const FiniteQuantale& from, const FiniteQuantale& to,
                                                   std::size_t cap) {
  const std::size_t m = from.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  auto below = [&](std::size_t a) {
    std::size_t c = 0;
    for (std::size_t b = 0; b < m; ++b) c += from.leq(b, a);
    return c;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return below(a) < below(b); });
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(m, 0);
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == m) {
      if (out.size() >= cap) throw SizeGuard("more than " + std::to_string(cap) + " monotone maps");
      out.push_back(cur);
      return;
    }
    std::size_t a = order[k];
    for (std::size_t v = 0; v < to.size(); ++v) {
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        std::size_t b = order[j];
        if (from.leq(b, a) && !to.leq(cur[b], v)) ok = false;
        if (from.leq(a, b) && !to.leq(v, cur[b])) ok = false;
      }
      if (!ok) continue;
      cur[a] = v;
      go(k + 1);
    }
  };
  go(0);
  return out;
}

// All functions {0..n-1} -> {0..k-1} in lexicographic order.
std::vector<std::vector<std::size_t>> allFunctions(std::size_t n, std::size_t k, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= k;
    if (total > cap) throw SizeGuard("more than " + std::to_string(cap) + " carrier functions");
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    out.push_back(cur);
    for (std::size_t i = n; i-- > 0;) {
      if (++cur[i] < k) break;
      cur[i] = 0;
    }
  }
  return out;
}

// Monotone d tables (|A|, Q_A) -> Q_B, flattened x * |Q_A| + a.
std::vector<std::vector<std::size_t>> monotoneTables(const FiniteQqmSpace& A, const FiniteQuantale& qb,
                                                     std::size_t cap) {
  auto maps = monotoneMaps(A.q(), qb, cap);
  auto picks = allFunctions(A.size(), maps.size(), cap);
  std::vector<std::vector<std::size_t>> out;
  for (const auto& p : picks) {
    std::vector<std::size_t> t;
    for (std::size_t x = 0; x < A.size(); ++x) t.insert(t.end(), maps[p[x]].begin(), maps[p[x]].end());
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<FiniteMorphism> enumerateMorphisms(const FiniteQqmSpace& A, const FiniteQqmSpace& B,
                                               const WorkbenchCaps& caps) {
  auto fs = allFunctions(A.size(), B.size(), caps.morphisms);
  auto ts = monotoneTables(A, B.q(), caps.morphisms);
  if (fs.size() * fs.size() * ts.size() > caps.morphisms)
    throw SizeGuard("hom-set scan of " + std::to_string(fs.size() * fs.size() * ts.size()) + " candidates exceeds cap");
  const std::size_t qa = A.q().size();
  std::vector<FiniteMorphism> out;
  for (const auto& f : fs)
    for (const auto& t : ts) {
      // Clause (fx, d(x,a), fy) does not depend on g.
      bool ok = true;
      for (std::size_t x = 0; x < A.size() && ok; ++x)
        for (std::size_t a = 0; a < qa && ok; ++a)
          for (std::size_t y = 0; y < A.size() && ok; ++y)
            if (A.contains(x, a, y) && !B.contains(f[x], t[x * qa + a], f[y])) ok = false;
      if (!ok) continue;
      for (const auto& g : fs) {
        FiniteMorphism m{f, g, t};
        if (isMorphism(A, B, m).ok()) out.push_back(std::move(m));
      }
    }
  return out;
}

// ---------------------------------------------------------------- constructions

FiniteQqmSpace terminalSpace() {
  auto q = std::make_shared<FiniteQuantale>(std::vector<std::string>{"1"}, std::vector<std::vector<bool>>{{true}},
                                            std::vector<std::vector<std::size_t>>{{0}}, 0);
  return FiniteQqmSpace({"0"}, q, {1});
}

FiniteQqmSpace productSpace(const FiniteQqmSpace& A, const FiniteQqmSpace& B) {
  auto q = FiniteQuantale::product(A.q(), B.q());
  const std::size_t qb = B.q().size();
  std::vector<std::string> carrier;
  for (const auto& x : A.labels())
    for (const auto& y : B.labels()) carrier.push_back("(" + x + "," + y + ")");
  const std::size_t n = carrier.size(), m = q->size();
  std::vector<char> pred(n * n * m, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t e = 0; e < m; ++e) {
        std::size_t x = u / B.size(), y = u % B.size(), z = v / B.size(), w = v % B.size();
        pred[(u * n + v) * m + e] = A.contains(x, e / qb, z) && B.contains(y, e % qb, w);
      }
  return FiniteQqmSpace(carrier, q, std::move(pred), A.raw() || B.raw());
}

ExponentialSpace exponentialSpace(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const WorkbenchCaps& caps) {
  if (A.size() > caps.carrier || B.size() > caps.carrier)
    throw SizeGuard("exponential input carrier exceeds cap " + std::to_string(caps.carrier));
  if (A.q().size() > caps.quantale || B.q().size() > caps.quantale)
    throw SizeGuard("exponential input quantale exceeds cap " + std::to_string(caps.quantale));
  ExponentialSpace E{terminalSpace(), allFunctions(A.size(), B.size(), caps.expCarrier),
                     monotoneTables(A, B.q(), caps.expQuantale)};
  const FiniteQuantale& qb = B.q();
  const std::size_t qa = A.q().size(), k = E.tables.size(), w = E.tables[0].size();

  std::map<std::vector<std::size_t>, std::size_t> pos;
  for (std::size_t i = 0; i < k; ++i) pos[E.tables[i]] = i;
  std::vector<std::string> names;
  for (const auto& t : E.tables) {
    std::string s;
    for (std::size_t i = 0; i < w; ++i) {
      if (i) s += (i % qa == 0) ? "|" : ",";
      s += qb.name(t[i]);
    }
    names.push_back(s);
  }
  std::vector<std::vector<bool>> order(k, std::vector<bool>(k));
  std::vector<std::vector<std::size_t>> tensor(k, std::vector<std::size_t>(k));
  std::vector<std::size_t> tmp(w);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      bool le = true;
      for (std::size_t c = 0; c < w; ++c) {
        le = le && qb.leq(E.tables[i][c], E.tables[j][c]);
        tmp[c] = qb.tensor(E.tables[i][c], E.tables[j][c]);
      }
      order[i][j] = le;
      tensor[i][j] = pos.at(tmp);
    }
  auto q = std::make_shared<FiniteQuantale>(names, order, tensor, pos.at(std::vector<std::size_t>(w, qb.top())));

  std::vector<std::string> carrier;
  for (const auto& f : E.functions) {
    std::string s = "[";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + B.label(f[i]);
    carrier.push_back(s + "]");
  }
  std::vector<std::array<std::size_t, 3>> triples;
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t a = 0; a < qa; ++a)
      for (std::size_t y = 0; y < A.size(); ++y)
        if (A.contains(x, a, y)) triples.push_back({x, a, y});
  const std::size_t n = carrier.size();
  std::vector<char> pred(n * n * k, 0);
  for (std::size_t fi = 0; fi < n; ++fi)
    for (std::size_t ti = 0; ti < k; ++ti) {
      const auto& f = E.functions[fi];
      const auto& t = E.tables[ti];
      bool self = true;
      for (const auto& [x, a, y] : triples) self = self && B.contains(f[x], t[x * qa + a], f[y]);
      if (!self) continue;
      for (std::size_t gi = 0; gi < n; ++gi) {
        const auto& g = E.functions[gi];
        bool ok = true;
        for (const auto& [x, a, y] : triples) ok = ok && B.contains(f[x], t[x * qa + a], g[y]);
        pred[(fi * n + gi) * k + ti] = ok;
      }
    }
  E.space = FiniteQqmSpace(carrier, q, std::move(pred), true);
  return E;
}

WeakCoproduct weakCoproduct(const FiniteQqmSpace& A, const FiniteQqmSpace& B) {
  auto la = FiniteQuantale::lifted(A.q());
  auto lb = FiniteQuantale::lifted(B.q());
  auto q = FiniteQuantale::product(*la, *lb);
  const std::size_t nl = lb->size();
  std::vector<std::string> carrier;
  for (const auto& x : A.labels()) carrier.push_back("0:" + x);
  for (const auto& y : B.labels()) carrier.push_back("1:" + y);
  const std::size_t n = carrier.size(), m = q->size(), na = A.size();
  std::vector<char> pred(n * n * m, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t e = 0; e < m; ++e) {
        std::size_t i = e / nl, j = e % nl;
        bool in = false;
        if (i == 0 && j == 0)
          in = true;
        else if (j == 0 && u < na && v < na)
          in = A.contains(u, i - 1, v);
        else if (i == 0 && u >= na && v >= na)
          in = B.contains(u - na, j - 1, v - na);
        pred[(u * n + v) * m + e] = in;
      }
  return {FiniteQqmSpace(carrier, q, std::move(pred), A.raw() || B.raw()), na};
}

FiniteMorphism WeakCoproduct::section(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteQqmSpace& C,
                                      const FiniteMorphism& m1, const FiniteMorphism& m2) const {
  const std::size_t qa = A.q().size(), qb = B.q().size(), nl = qb + 1, m = space.q().size();
  FiniteMorphism s;
  s.f = m1.f;
  s.f.insert(s.f.end(), m2.f.begin(), m2.f.end());
  s.g = m1.g;
  s.g.insert(s.g.end(), m2.g.begin(), m2.g.end());
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t e = 0; e < m; ++e) {
      std::size_t i = e / nl;
      s.d.push_back(i == 0 ? C.q().bottom() : m1.d[x * qa + i - 1]);
    }
  for (std::size_t z = 0; z < B.size(); ++z)
    for (std::size_t e = 0; e < m; ++e) {
      std::size_t j = e % nl;
      s.d.push_back(j == 0 ? C.q().bottom() : m2.d[z * qb + j - 1]);
    }
  return s;
}

std::pair<FiniteMorphism, FiniteMorphism> WeakCoproduct::retraction(const FiniteQqmSpace& A, const FiniteQqmSpace& B,
                                                                    const FiniteQqmSpace&,
                                                                    const FiniteMorphism& m) const {
  const std::size_t qa = A.q().size(), qb = B.q().size(), nl = qb + 1, w = space.q().size();
  FiniteMorphism m1, m2;
  for (std::size_t x = 0; x < A.size(); ++x) {
    m1.f.push_back(m.f[x]);
    m1.g.push_back(m.g[x]);
    for (std::size_t a = 0; a < qa; ++a) m1.d.push_back(m.d[x * w + (a + 1) * nl]);
  }
  for (std::size_t z = 0; z < B.size(); ++z) {
    std::size_t u = leftSize + z;
    m2.f.push_back(m.f[u]);
    m2.g.push_back(m.g[u]);
    for (std::size_t b = 0; b < qb; ++b) m2.d.push_back(m.d[u * w + b + 1]);
  }
  return {m1, m2};
}

CheckReport weakCoproductLaws(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteQqmSpace& C,
                              const WorkbenchCaps& caps) {
  CheckReport rep;
  auto W = weakCoproduct(A, B);
  {
    Verdict v = Verdict::proved();
    for (std::size_t u = 0; u < W.space.size() && v.ok(); ++u)
      for (std::size_t w = 0; w < W.space.size() && v.ok(); ++w)
        if (!W.space.contains(u, 0, w)) v = Verdict::refuted({{"u", W.space.label(u)}, {"v", W.space.label(w)}});
    rep.add("empty radius relates everything", v);
  }
  {
    Verdict v = Verdict::proved();
    auto ax = checkAxioms(W.space, {Axiom::QuasiReflexive, Axiom::Transitive});
    for (const auto& [a, r] : ax)
      if (!r.holds) v = Verdict::refuted({{"axiom", toString(a)}, {"witness", r.witness}});
    if (auto bad = W.space.closureFailure()) v = Verdict::refuted({{"closure", *bad}});
    rep.add("coproduct is a closed quasi-quasi-metric", v);
  }
  auto ms1 = enumerateMorphisms(A, C, caps);
  auto ms2 = enumerateMorphisms(B, C, caps);
  auto hs = enumerateMorphisms(C, C, caps);
  Verdict roundTrip = Verdict::proved(), lands = Verdict::proved(), natural = Verdict::proved();
  std::size_t pairs = 0, landed = 0, squares = 0;
  const std::size_t total = ms1.size() * ms2.size();
  // Past the cap, pairs are a deterministic cover: every m1 and every m2
  // appears, plus a strided sweep of the full grid.
  std::vector<std::pair<std::size_t, std::size_t>> grid;
  if (total <= caps.pairs) {
    for (std::size_t i = 0; i < ms1.size(); ++i)
      for (std::size_t j = 0; j < ms2.size(); ++j) grid.emplace_back(i, j);
  } else {
    for (std::size_t i = 0; i < std::max(ms1.size(), ms2.size()); ++i)
      grid.emplace_back(i % ms1.size(), i % ms2.size());
    std::size_t stride = total / (caps.pairs / 2) + 1;
    for (std::size_t k = 0; k < total; k += stride) grid.emplace_back(k / ms2.size(), k % ms2.size());
  }
  // The morphism check on the cotuple and the naturality squares run on a
  // deterministic subset.
  const std::size_t landStride = std::max<std::size_t>(1, grid.size() / 4096);
  const std::size_t squareStride = std::max<std::size_t>(1, grid.size() / 64);
  const std::size_t hStride = std::max<std::size_t>(1, hs.size() / 4);
  for (const auto& [i, j] : grid) {
    auto s = W.section(A, B, C, ms1[i], ms2[j]);
    const std::size_t k = pairs++;
    auto r = W.retraction(A, B, C, s);
    if (!(r.first == ms1[i] && r.second == ms2[j]) && roundTrip.ok())
      roundTrip = Verdict::refuted({{"m1", ms1[i].toJson(A, C)}, {"m2", ms2[j].toJson(B, C)}});
    if (k % landStride == 0) {
      ++landed;
      Verdict mv = isMorphism(W.space, C, s);
      if (mv.isRefuted() && lands.ok())
        lands = Verdict::refuted({{"m1", ms1[i].toJson(A, C)}, {"m2", ms2[j].toJson(B, C)}, {"failure", mv.witness}});
    }
    if (k % squareStride != 0) continue;
    for (std::size_t h = 0; h < hs.size(); h += hStride) {
      ++squares;
      auto lhs = W.retraction(A, B, C, compose(W.space, C, s, hs[h]));
      auto rhs1 = compose(A, C, r.first, hs[h]);
      auto rhs2 = compose(B, C, r.second, hs[h]);
      if (!(lhs.first == rhs1 && lhs.second == rhs2) && natural.ok())
        natural = Verdict::refuted({{"m1", ms1[i].toJson(A, C)}, {"m2", ms2[j].toJson(B, C)}, {"h", hs[h].toJson(C, C)}});
    }
  }
  if (pairs < total) roundTrip = roundTrip.sampled(pairs);
  rep.add("retraction after section is identity", roundTrip, {{"pairs", pairs}, {"homPairs", total}});
  rep.add("section yields morphisms", landed == pairs ? lands : lands.sampled(landed), {{"pairs", landed}});
  rep.add("retraction is natural", natural, {{"squares", squares}});
  return rep;
}

CheckReport categoryLaws(const std::vector<FiniteQqmSpace>& spaces, const std::vector<FiniteMorphism>& ms) {
  if (ms.size() + 1 != spaces.size()) throw std::invalid_argument("need one morphism between consecutive spaces");
  CheckReport rep;
  for (std::size_t i = 0; i < ms.size(); ++i) rep.add("m" + std::to_string(i + 1) + " is a morphism", isMorphism(spaces[i], spaces[i + 1], ms[i]));
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& A = spaces[i];
    const auto& B = spaces[i + 1];
    bool left = compose(A, A, identityMorphism(A), ms[i]) == ms[i];
    bool right = compose(A, B, ms[i], identityMorphism(B)) == ms[i];
    rep.add("identity laws for m" + std::to_string(i + 1),
            left && right ? Verdict::proved() : Verdict::refuted({{"left", left}, {"right", right}}));
  }
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    auto c = compose(spaces[i], spaces[i + 1], ms[i], ms[i + 1]);
    rep.add("composite m" + std::to_string(i + 2) + " . m" + std::to_string(i + 1) + " is a morphism",
            isMorphism(spaces[i], spaces[i + 2], c));
  }
  for (std::size_t i = 0; i + 2 < ms.size(); ++i) {
    const auto &A = spaces[i], &B = spaces[i + 1], &C = spaces[i + 2];
    auto l = compose(A, C, compose(A, B, ms[i], ms[i + 1]), ms[i + 2]);
    auto r = compose(A, B, ms[i], compose(B, C, ms[i + 1], ms[i + 2]));
    rep.add("associativity at m" + std::to_string(i + 1), l == r ? Verdict::proved() : Verdict::refuted({{"index", i}}));
  }
  return rep;
}

CheckReport closureTheoremSuite(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const WorkbenchCaps& caps) {
  CheckReport rep;
  const std::vector<Axiom> three{Axiom::SelfIndistancy, Axiom::LST, Axiom::WeakSymmetry};
  auto axiomVerdict = [](const AxiomReport& r) {
    Verdict v = Verdict::proved();
    for (const auto& [a, res] : r)
      if (!res.holds && v.ok()) v = Verdict::refuted({{"axiom", toString(a)}, {"witness", res.witness}});
    return v;
  };
  for (const auto* s : {&A, &B}) {
    const char* nm = s == &A ? "A" : "B";
    if (auto bad = s->closureFailure()) {
      rep.add(std::string("input ") + nm + " closed", Verdict::refuted({{"closure", *bad}}));
      return rep;
    }
    rep.add(std::string("input ") + nm + " hypotheses", axiomVerdict(checkAxioms(*s, three)));
  }
  auto E = exponentialSpace(A, B, caps);
  const auto& S = E.space;
  rep.add("exponential closed", S.closureFailure() ? Verdict::refuted({{"closure", *S.closureFailure()}}) : Verdict::proved());
  rep.add("exponential quasi-reflexive and transitive", axiomVerdict(checkAxioms(S, {Axiom::QuasiReflexive, Axiom::Transitive})));
  for (Axiom a : three) rep.add("exponential " + toString(a), axiomVerdict(checkAxioms(S, {a})));

  const std::size_t qa = A.q().size();
  Verdict lemma = Verdict::proved();
  for (std::size_t fi = 0; fi < S.size() && lemma.ok(); ++fi) {
    const auto& t = E.tables[S.sigma(fi)];
    const auto& f = E.functions[fi];
    for (std::size_t x = 0; x < A.size(); ++x)
      if (t[x * qa + A.sigma(x)] != B.sigma(f[x])) {
        lemma = Verdict::refuted({{"f", S.label(fi)}, {"x", A.label(x)},
                                  {"sigma_f(x, sigma_x)", B.q().name(t[x * qa + A.sigma(x)])},
                                  {"sigma_fx", B.q().name(B.sigma(f[x]))}});
        break;
      }
  }
  rep.add("self-distance lemma", lemma);
  auto c15 = checkSymmetryCorollary(S);
  rep.add("symmetry corollary", c15.holds ? Verdict::proved() : Verdict::refuted(c15.witness));
  auto c16 = checkIndistancyCorollary(S);
  rep.add("indistancy corollary", c16.holds ? Verdict::proved() : Verdict::refuted(c16.witness));
  return rep;
}

// ---------------------------------------------------------------- random spaces

namespace {

RelationTable randomRelation(Rng& rng, std::size_t n, const FiniteQuantalePtr& q) {
  RelationTable t{{}, q, std::vector<std::size_t>(n * n)};
  for (std::size_t i = 0; i < n; ++i) t.carrier.push_back("p" + std::to_string(i));
  for (auto& v : t.values) v = rng.coin(0.3) ? q->bottom() : rng.index(q->size());
  return t;
}

void closeTransitive(RelationTable& t, bool quasiReflexive) {
  const FiniteQuantale& q = *t.q;
  const std::size_t n = t.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          auto& xz = t.values[x * n + z];
          std::size_t j = q.join(xz, q.tensor(t.at(x, y), t.at(y, z)));
          if (j != xz) xz = j, changed = true;
        }
    if (!quasiReflexive) continue;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        auto& xx = t.values[x * n + x];
        std::size_t j = q.join(xx, t.at(x, y));
        if (j != xx) xx = j, changed = true;
      }
  }
}

}  // namespace

FiniteQqmSpace randomQqmSpace(Rng& rng, std::size_t n, const FiniteQuantalePtr& q) {
  auto t = randomRelation(rng, n, q);
  closeTransitive(t, true);
  return FiniteQqmSpace::fromRelation(t);
}

FiniteQqmSpace randomTheoremSpace(Rng& rng, std::size_t n, const FiniteQuantalePtr& q, double general) {
  const std::vector<Axiom> three{Axiom::SelfIndistancy, Axiom::LST, Axiom::WeakSymmetry};
  if (rng.coin(general)) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto s = randomQqmSpace(rng, n, q);
      auto rep = checkAxioms(s, three);
      if (std::all_of(rep.begin(), rep.end(), [](const auto& kv) { return kv.second.holds; })) return s;
    }
  }
  // Separated metric: symmetric, top on the diagonal, below top elsewhere.
  RelationTable t = randomRelation(rng, n, q);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      std::size_t& v = t.values[x * n + y];
      if (x == y)
        v = q->top();
      else if (y < x)
        v = t.at(y, x);
      else if (v == q->top())
        v = q->bottom();
    }
  closeTransitive(t, false);
  return FiniteQqmSpace::fromRelation(t);
}

std::vector<double> randomLawvereRelation(Rng& rng, std::size_t n, int maxValue, double pInf) {
  std::vector<double> phi(n * n);
  for (auto& v : phi)
    v = rng.coin(pInf) ? kInf : static_cast<double>(rng.index(static_cast<std::size_t>(maxValue) + 1));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) phi[x * n + x] = std::min(phi[x * n + x], phi[x * n + y]);
  return phi;
}

}  // namespace qqm
