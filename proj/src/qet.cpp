#include "qqm/qet.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qqm/metrics.hpp"
#include "qqm/normalize.hpp"
#include "qqm/parser.hpp"
#include "qqm/typecheck.hpp"

namespace qqm {

// ---------------------------------------------------------------------------
// DistExpr

DistExpr DistExpr::make(Node n) { return DistExpr(std::make_shared<const Node>(std::move(n))); }

DistExpr DistExpr::constant(double r) {
  Node n;
  n.kind = Kind::Const;
  n.value = r;
  return make(std::move(n));
}

DistExpr DistExpr::var(std::string name) {
  Node n;
  n.kind = Kind::Var;
  n.name = std::move(name);
  return make(std::move(n));
}

DistExpr DistExpr::primMod(PrimRef prim, std::vector<Term> args, std::vector<DistExpr> radii) {
  if (args.size() != radii.size()) throw std::invalid_argument("modulus node needs one radius per argument");
  Node n;
  n.kind = Kind::PrimMod;
  n.prim = std::move(prim);
  n.terms = std::move(args);
  n.kids = std::move(radii);
  return make(std::move(n));
}

DistExpr DistExpr::app(DistExpr fn, Term arg, DistExpr argDist) {
  Node n;
  n.kind = Kind::App;
  n.terms = {std::move(arg)};
  n.kids = {std::move(fn), std::move(argDist)};
  return make(std::move(n));
}

DistExpr DistExpr::lam(std::string binder, SimpleType type, DistExpr body) {
  Node n;
  n.kind = Kind::Lam;
  n.name = std::move(binder);
  n.type = std::move(type);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

DistExpr DistExpr::pair(DistExpr l, DistExpr r) {
  Node n;
  n.kind = Kind::Pair;
  n.kids = {std::move(l), std::move(r)};
  return make(std::move(n));
}

DistExpr DistExpr::fst(DistExpr d) {
  Node n;
  n.kind = Kind::Fst;
  n.kids = {std::move(d)};
  return make(std::move(n));
}

DistExpr DistExpr::snd(DistExpr d) {
  Node n;
  n.kind = Kind::Snd;
  n.kids = {std::move(d)};
  return make(std::move(n));
}

DistExpr DistExpr::tensor(SimpleType type, DistExpr l, DistExpr r) {
  Node n;
  n.kind = Kind::Tensor;
  n.type = std::move(type);
  n.kids = {std::move(l), std::move(r)};
  return make(std::move(n));
}

DistExpr DistExpr::meet(SimpleType type, std::vector<DistExpr> family) {
  if (family.empty()) throw std::invalid_argument("meet of an empty family");
  Node n;
  n.kind = Kind::Meet;
  n.type = std::move(type);
  n.kids = std::move(family);
  return make(std::move(n));
}

DistExpr DistExpr::join(SimpleType type, std::vector<DistExpr> family) {
  if (family.empty()) throw std::invalid_argument("join of an empty family");
  Node n;
  n.kind = Kind::Join;
  n.type = std::move(type);
  n.kids = std::move(family);
  return make(std::move(n));
}

DistExpr DistExpr::deriv(Term t) {
  Node n;
  n.kind = Kind::Deriv;
  n.terms = {std::move(t)};
  return make(std::move(n));
}

DistExpr DistExpr::subst(DistExpr inner, std::size_t position, std::string name, SimpleType type, Term p, DistExpr b) {
  Node n;
  n.kind = Kind::Subst;
  n.position = position;
  n.name = std::move(name);
  n.type = std::move(type);
  n.terms = {std::move(p)};
  n.kids = {std::move(inner), std::move(b)};
  return make(std::move(n));
}

double DistExpr::value() const {
  if (kind() != Kind::Const) throw std::logic_error("not a constant distance");
  return node_->value;
}
const std::string& DistExpr::name() const { return node_->name; }
const PrimRef& DistExpr::prim() const { return node_->prim; }
const std::vector<Term>& DistExpr::terms() const { return node_->terms; }
const std::vector<DistExpr>& DistExpr::kids() const { return node_->kids; }
const SimpleType& DistExpr::type() const {
  if (!node_->type) throw std::logic_error("distance node carries no type");
  return *node_->type;
}
std::size_t DistExpr::position() const { return node_->position; }

bool operator==(const DistExpr& a, const DistExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.name != y.name || x.position != y.position) return false;
  if (x.kind == DistExpr::Kind::Const && !(x.value == y.value)) return false;
  if (x.kind == DistExpr::Kind::PrimMod && !(x.prim == y.prim)) return false;
  if (x.type.has_value() != y.type.has_value() || (x.type && *x.type != *y.type)) return false;
  return x.terms == y.terms && x.kids == y.kids;
}

namespace {

Json scalarJson(double r) {
  if (std::isinf(r)) return "inf";
  return r;
}

double scalarFromJson(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("bad scalar: " + j.dump());
  }
  return j.get<double>();
}

PrimRef parsePrimRef(const std::string& s) {
  auto open = s.find('[');
  if (open == std::string::npos) return PrimRef{s, std::nullopt};
  auto close = s.find(']', open);
  if (close == std::string::npos) throw std::invalid_argument("bad primitive reference: " + s);
  return PrimRef{s.substr(0, open), std::stod(s.substr(open + 1, close - open - 1))};
}

Json jsonList(const std::vector<DistExpr>& v) {
  Json out = Json::array();
  for (const auto& d : v) out.push_back(d.toJson());
  return out;
}

std::vector<DistExpr> listFromJson(const Json& j) {
  std::vector<DistExpr> out;
  for (const auto& e : j) out.push_back(DistExpr::fromJson(e));
  return out;
}

SimpleType typeField(const Json& j) { return j.contains("type") ? parseType(j.at("type").get<std::string>()) : SimpleType::real(); }

}  // namespace

Json DistExpr::toJson() const {
  switch (kind()) {
    case Kind::Const:
      return scalarJson(value());
    case Kind::Var:
      return {{"var", name()}};
    case Kind::PrimMod: {
      Json args = Json::array();
      for (const auto& t : terms()) args.push_back(t.str());
      return {{"prim", prim().str()}, {"args", args}, {"radii", jsonList(kids())}};
    }
    case Kind::App:
      return {{"app", kids()[0].toJson()}, {"arg", terms()[0].str()}, {"argDist", kids()[1].toJson()}};
    case Kind::Lam:
      return {{"lam", name()}, {"type", type().str()}, {"body", kids()[0].toJson()}};
    case Kind::Pair:
      return {{"pair", jsonList(kids())}};
    case Kind::Fst:
      return {{"fst", kids()[0].toJson()}};
    case Kind::Snd:
      return {{"snd", kids()[0].toJson()}};
    case Kind::Tensor:
      return {{"tensor", jsonList(kids())}, {"type", type().str()}};
    case Kind::Meet:
      return {{"meet", jsonList(kids())}, {"type", type().str()}};
    case Kind::Join:
      return {{"join", jsonList(kids())}, {"type", type().str()}};
    case Kind::Deriv:
      return {{"deriv", terms()[0].str()}};
    case Kind::Subst:
      return {{"subst", kids()[0].toJson()}, {"at", position()},       {"var", name()},
              {"type", type().str()},        {"term", terms()[0].str()}, {"dist", kids()[1].toJson()}};
  }
  throw std::logic_error("unknown distance node");
}

DistExpr DistExpr::fromJson(const Json& j) {
  if (j.is_number() || j.is_string()) return constant(scalarFromJson(j));
  if (!j.is_object()) throw std::invalid_argument("bad distance expression: " + j.dump());
  if (j.contains("const")) return constant(scalarFromJson(j.at("const")));
  // Subst nodes also carry "var"
  if (j.contains("subst"))
    return subst(fromJson(j.at("subst")), j.at("at").get<std::size_t>(), j.at("var").get<std::string>(), typeField(j),
                 parseTerm(j.at("term").get<std::string>()), fromJson(j.at("dist")));
  if (j.contains("var")) return var(j.at("var").get<std::string>());
  if (j.contains("prim")) {
    std::vector<Term> args;
    for (const auto& a : j.at("args")) args.push_back(parseTerm(a.get<std::string>()));
    return primMod(parsePrimRef(j.at("prim").get<std::string>()), std::move(args), listFromJson(j.at("radii")));
  }
  if (j.contains("app"))
    return app(fromJson(j.at("app")), parseTerm(j.at("arg").get<std::string>()), fromJson(j.at("argDist")));
  if (j.contains("lam")) return lam(j.at("lam").get<std::string>(), typeField(j), fromJson(j.at("body")));
  if (j.contains("pair")) {
    auto kids = listFromJson(j.at("pair"));
    if (kids.size() != 2) throw std::invalid_argument("pair distance needs two components");
    return pair(kids[0], kids[1]);
  }
  if (j.contains("fst")) return fst(fromJson(j.at("fst")));
  if (j.contains("snd")) return snd(fromJson(j.at("snd")));
  if (j.contains("tensor")) {
    auto kids = listFromJson(j.at("tensor"));
    if (kids.size() != 2) throw std::invalid_argument("tensor needs two operands");
    return tensor(typeField(j), kids[0], kids[1]);
  }
  if (j.contains("meet")) return meet(typeField(j), listFromJson(j.at("meet")));
  if (j.contains("join")) return join(typeField(j), listFromJson(j.at("join")));
  if (j.contains("deriv")) return deriv(parseTerm(j.at("deriv").get<std::string>()));
  throw std::invalid_argument("unknown distance expression: " + j.dump());
}

std::string DistExpr::str() const {
  auto list = [](const std::vector<DistExpr>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i].str();
    return s;
  };
  switch (kind()) {
    case Kind::Const:
      return formatReal(value());
    case Kind::Var:
      return "xi." + name();
    case Kind::PrimMod: {
      std::string s = prim().str() + "*(";
      for (std::size_t i = 0; i < terms().size(); ++i) s += (i ? ", " : "") + terms()[i].str();
      return s + "; " + list(kids(), ", ") + ")";
    }
    case Kind::App:
      return kids()[0].str() + "(" + terms()[0].str() + ", " + kids()[1].str() + ")";
    case Kind::Lam:
      return "(\\" + name() + ". " + kids()[0].str() + ")";
    case Kind::Pair:
      return "<" + list(kids(), ", ") + ">";
    case Kind::Fst:
      return "fst(" + kids()[0].str() + ")";
    case Kind::Snd:
      return "snd(" + kids()[0].str() + ")";
    case Kind::Tensor:
      return "(" + list(kids(), " + ") + ")";
    case Kind::Meet:
      return "meet(" + list(kids(), ", ") + ")";
    case Kind::Join:
      return "join(" + list(kids(), ", ") + ")";
    case Kind::Deriv:
      return "d[" + terms()[0].str() + "]";
    case Kind::Subst:
      return kids()[0].str() + "{" + name() + ":=" + terms()[0].str() + "/" + kids()[1].str() + "}";
  }
  return "?";
}

namespace {

TypingContext insertAt(const TypingContext& ctx, std::size_t k, const std::string& name, const SimpleType& type) {
  if (k > ctx.size()) throw std::invalid_argument("substitution position past the context");
  auto entries = ctx.entries();
  entries.insert(entries.begin() + static_cast<std::ptrdiff_t>(k), TypingContext::Entry{name, type});
  return TypingContext(std::move(entries));
}

}  // namespace

QuantaleValue evalDist(const DistExpr& e, const TypingContext& ctx, const Environment& gamma,
                       const ErrEnvironment& xi, const Semantics& sem) {
  using K = DistExpr::Kind;
  switch (e.kind()) {
    case K::Const:
      return QuantaleValue::scalar(e.value());
    case K::Var: {
      auto i = ctx.lookup(e.name());
      if (!i) throw std::invalid_argument("distance refers to unbound variable " + e.name());
      return xi.at(*i);
    }
    case K::PrimMod: {
      std::vector<double> xs, as;
      for (std::size_t i = 0; i < e.terms().size(); ++i) {
        xs.push_back(sem.eval(ctx, e.terms()[i], gamma).asReal());
        as.push_back(evalDist(e.kids()[i], ctx, gamma, xi, sem).asScalar());
      }
      return QuantaleValue::scalar(primModulus(sem.prims(), e.prim(), xs, as, sem.options()));
    }
    case K::App: {
      auto f = evalDist(e.kids()[0], ctx, gamma, xi, sem);
      return f.apply(sem.eval(ctx, e.terms()[0], gamma), evalDist(e.kids()[1], ctx, gamma, xi, sem));
    }
    case K::Lam: {
      TypingContext inner = ctx.extended(e.name(), e.type());
      DistExpr body = e.kids()[0];
      const Semantics* s = &sem;
      return QuantaleValue::errFun(
          [inner, body, gamma, xi, s](const SemValue& v, const QuantaleValue& a) {
            Environment g = gamma;
            ErrEnvironment x = xi;
            g.push_back(v);
            x.push_back(a);
            return evalDist(body, inner, g, x, *s);
          },
          "\\" + e.name() + ". " + body.str());
    }
    case K::Pair:
      return QuantaleValue::pair(evalDist(e.kids()[0], ctx, gamma, xi, sem), evalDist(e.kids()[1], ctx, gamma, xi, sem));
    case K::Fst:
      return evalDist(e.kids()[0], ctx, gamma, xi, sem).first();
    case K::Snd:
      return evalDist(e.kids()[0], ctx, gamma, xi, sem).second();
    case K::Tensor:
      return tensor(quantaleOfType(e.type()), evalDist(e.kids()[0], ctx, gamma, xi, sem),
                    evalDist(e.kids()[1], ctx, gamma, xi, sem));
    case K::Meet:
    case K::Join: {
      std::vector<QuantaleValue> fam;
      for (const auto& k : e.kids()) fam.push_back(evalDist(k, ctx, gamma, xi, sem));
      auto q = quantaleOfType(e.type());
      return e.kind() == K::Meet ? meet(q, fam) : join(q, fam);
    }
    case K::Deriv:
      return sem.derive(ctx, e.terms()[0], gamma, xi);
    case K::Subst: {
      std::size_t k = e.position();
      if (k > gamma.size()) throw std::invalid_argument("substitution position past the environment");
      Environment g = gamma;
      ErrEnvironment x = xi;
      g.insert(g.begin() + static_cast<std::ptrdiff_t>(k), sem.evalClosed(e.terms()[0]));
      x.insert(x.begin() + static_cast<std::ptrdiff_t>(k), evalDist(e.kids()[1], {}, {}, {}, sem));
      return evalDist(e.kids()[0], insertAt(ctx, k, e.name(), e.type()), g, x, sem);
    }
  }
  throw std::logic_error("unknown distance node");
}

// ---------------------------------------------------------------------------
// Judgments and derivations

namespace {

Json contextJson(const TypingContext& ctx) {
  Json out = Json::array();
  for (const auto& e : ctx.entries()) out.push_back(Json::array({e.name, e.type.str()}));
  return out;
}

TypingContext contextFromJson(const Json& j) {
  std::vector<TypingContext::Entry> entries;
  for (const auto& e : j) {
    if (e.is_array()) {
      entries.push_back({e.at(0).get<std::string>(), parseType(e.at(1).get<std::string>())});
    } else {
      entries.push_back({e.at("name").get<std::string>(), parseType(e.at("type").get<std::string>())});
    }
  }
  return TypingContext(std::move(entries));
}

const std::vector<std::string>& ruleNames() {
  static const std::vector<std::string> names{"lit",        "var",    "prim", "lam",  "app",  "pair",  "fst",
                                              "snd",        "sem-replace", "weaken", "join", "trans", "qrefl"};
  return names;
}

}  // namespace

Json Judgment::toJson() const {
  return {{"context", contextJson(ctx)},
          {"left", left.str()},
          {"dist", dist.toJson()},
          {"right", right.str()},
          {"type", type.str()}};
}

Judgment Judgment::fromJson(const Json& j) {
  return Judgment{j.contains("context") ? contextFromJson(j.at("context")) : TypingContext{},
                  parseTerm(j.at("left").get<std::string>()), DistExpr::fromJson(j.at("dist")),
                  parseTerm(j.at("right").get<std::string>()), parseType(j.at("type").get<std::string>())};
}

std::string Judgment::str() const {
  return ctx.str() + " |- (" + left.str() + ", " + dist.str() + ", " + right.str() + ") : " + type.str();
}

std::string toString(Rule r) { return ruleNames().at(static_cast<std::size_t>(r)); }

Rule ruleFromString(const std::string& s) {
  const auto& names = ruleNames();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == s) return static_cast<Rule>(i);
  throw std::invalid_argument("unknown rule: " + s);
}

Json Derivation::toJson() const {
  Json j = conclusion.toJson();
  j["rule"] = toString(rule);
  Json ps = Json::array();
  for (const auto& p : premises) ps.push_back(p.toJson());
  j["premises"] = ps;
  if (!evidence.is_null()) j["evidence"] = evidence;
  return j;
}

Derivation Derivation::fromJson(const Json& j) {
  const Json& c = j.contains("conclusion") ? j.at("conclusion") : j;
  Derivation d{ruleFromString(j.at("rule").get<std::string>()), {}, Judgment::fromJson(c), nullptr};
  if (j.contains("premises"))
    for (const auto& p : j.at("premises")) d.premises.push_back(fromJson(p));
  if (j.contains("evidence")) d.evidence = j.at("evidence");
  return d;
}

Derivation Derivation::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return fromJson(Json::parse(in));
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

// ---------------------------------------------------------------------------
// Checking

Json NodeReport::toJson() const {
  Json j = checks.toJson();
  j["path"] = path;
  j["rule"] = toString(rule);
  j["judgment"] = judgment;
  return j;
}

const NodeReport* DerivationReport::firstFailure() const {
  for (const auto& n : nodes)
    if (n.checks.overall().isRefuted()) return &n;
  return nullptr;
}

Json DerivationReport::toJson() const {
  Json nodesJson = Json::array();
  for (const auto& n : nodes) nodesJson.push_back(n.toJson());
  Json j{{"verdict", qqm::toJson(verdict)}, {"nodes", nodesJson}};
  if (const auto* f = firstFailure()) j["firstFailure"] = f->path;
  return j;
}

namespace {

struct EnvSample {
  Environment gamma;
  ErrEnvironment xi;
};

std::vector<EnvSample> sampleEnvironments(const TypingContext& ctx, const SamplerConfig& cfg, const std::string& label) {
  if (ctx.empty()) return {EnvSample{}};
  std::vector<std::vector<SemValue>> values;
  std::vector<std::vector<QuantaleValue>> radii;
  for (const auto& e : ctx.entries()) {
    values.push_back(sampleValues(e.type, cfg));
    radii.push_back(sampleElements(quantaleOfType(e.type), cfg));
  }
  Rng rng(streamSeed(cfg.seed, label));
  std::vector<EnvSample> out;
  for (std::size_t k = 0; k < cfg.pointsPerDomain; ++k) {
    EnvSample s;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      s.gamma.push_back(values[i][rng.index(values[i].size())]);
      s.xi.push_back(radii[i][rng.index(radii[i].size())]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Json envJson(const EnvSample& s) {
  Json g = Json::array(), x = Json::array();
  for (const auto& v : s.gamma) g.push_back(v.str());
  for (const auto& v : s.xi) x.push_back(v.str());
  return {{"gamma", g}, {"xi", x}};
}

struct Checker {
  const Semantics& sem;
  const QetOptions& opts;

  // Structural identity is Proved; otherwise the two sides are compared
  // at sampled (gamma, xi).
  Verdict distEqual(const DistExpr& got, const DistExpr& expected, const TypingContext& ctx, const SimpleType& type,
                    const std::string& label) const {
    if (got == expected) return Verdict::proved();
    auto q = quantaleOfType(type);
    auto envs = sampleEnvironments(ctx, opts.sampler, label);
    Verdict total = Verdict::proved();
    for (const auto& s : envs) {
      auto a = evalDist(got, ctx, s.gamma, s.xi, sem);
      auto b = evalDist(expected, ctx, s.gamma, s.xi, sem);
      Verdict v = quantaleEqual(q, a, b, opts.tol, opts.sampler);
      if (v.isRefuted()) {
        Json w = envJson(s);
        w["got"] = got.str();
        w["expected"] = expected.str();
        w["difference"] = v.witness;
        return Verdict::refuted(w);
      }
      total &= v;
    }
    return ctx.empty() ? total : total.sampled(envs.size());
  }

  Verdict distLeq(const DistExpr& lower, const DistExpr& upper, const TypingContext& ctx, const SimpleType& type,
                  const std::string& label) const {
    auto q = quantaleOfType(type);
    auto envs = sampleEnvironments(ctx, opts.sampler, label);
    Verdict total = Verdict::proved();
    for (const auto& s : envs) {
      auto a = evalDist(lower, ctx, s.gamma, s.xi, sem);
      auto b = evalDist(upper, ctx, s.gamma, s.xi, sem);
      Verdict v = leq(q, a, b, opts.sampler);
      if (v.isRefuted()) {
        Json w = envJson(s);
        w["lower"] = a.str();
        w["upper"] = b.str();
        return Verdict::refuted(w);
      }
      total &= v;
    }
    return ctx.empty() ? total : total.sampled(envs.size());
  }

  bool semEqualValues(const SimpleType& type, const SemValue& a, const SemValue& b) const {
    switch (type.kind()) {
      case SimpleType::Kind::Real: {
        double x = a.asReal(), y = b.asReal();
        return x == y || std::fabs(x - y) <= opts.tol * std::max(1.0, std::max(std::fabs(x), std::fabs(y)));
      }
      case SimpleType::Kind::Prod:
        return semEqualValues(type.left(), a.first(), b.first()) && semEqualValues(type.right(), a.second(), b.second());
      case SimpleType::Kind::Arrow:
        for (const auto& v : sampleValues(type.dom(), opts.sampler))
          if (!semEqualValues(type.cod(), a.apply(v), b.apply(v))) return false;
        return true;
    }
    return false;
  }

  /// [[t]] = [[p]]: beta-eta equality, else sampled denotational equality.
  std::pair<Verdict, std::string> semEqual(const Term& t, const Term& p, const TypingContext& ctx,
                                           const SimpleType& type, const std::string& label) const {
    if (betaEtaEqual(t, p)) return {Verdict::proved(), "beta-eta"};
    auto envs = sampleEnvironments(ctx, opts.sampler, label);
    for (const auto& s : envs) {
      auto a = sem.eval(ctx, t, s.gamma);
      auto b = sem.eval(ctx, p, s.gamma);
      if (!semEqualValues(type, a, b)) {
        Json w = envJson(s);
        w["left"] = a.str();
        w["right"] = b.str();
        return {Verdict::refuted(w), "sampled"};
      }
    }
    return {Verdict::sampledOk(envs.size()), "sampled"};
  }

  static Verdict schema(bool ok, const std::string& path, Rule rule, const std::string& expected) {
    if (ok) return Verdict::proved();
    return Verdict::refuted({{"node", path}, {"rule", toString(rule)}, {"expected", expected}});
  }

  void check(const Derivation& d, const std::string& path, std::vector<NodeReport>& out) const {
    std::size_t slot = out.size();
    out.push_back(NodeReport{path, d.rule, d.conclusion.str(), {}});
    for (std::size_t i = 0; i < d.premises.size(); ++i) check(d.premises[i], path + "." + std::to_string(i), out);
    CheckReport r;
    try {
      checkNode(d, path, r);
    } catch (const std::exception& e) {
      r.add("evaluation", Verdict::refuted({{"node", path}, {"error", e.what()}}));
    }
    out[slot].checks = std::move(r);
  }

  void checkNode(const Derivation& d, const std::string& path, CheckReport& r) const {
    const Judgment& J = d.conclusion;
    const auto& P = d.premises;
    const Rule rule = d.rule;
    auto S = [&](bool ok, const std::string& what) { r.add("schema: " + what, schema(ok, path, rule, what)); };

    // Well-formedness of the conclusion.
    for (const Term* t : {&J.left, &J.right}) {
      try {
        SimpleType ty = typecheck(J.ctx, *t, sem.prims());
        S(ty == J.type, t->str() + " has type " + J.type.str());
      } catch (const std::exception& e) {
        r.add("schema: " + t->str() + " typechecks", Verdict::refuted({{"node", path}, {"error", e.what()}}));
      }
    }
    {
      auto envs = sampleEnvironments(J.ctx, opts.sampler, path + "/shape");
      try {
        checkShape(quantaleOfType(J.type), evalDist(J.dist, J.ctx, envs[0].gamma, envs[0].xi, sem));
        r.add("schema: distance shape", Verdict::proved());
      } catch (const std::exception& e) {
        r.add("schema: distance shape", Verdict::refuted({{"node", path}, {"error", e.what()}}));
        return;
      }
    }
    if (r.overall().isRefuted()) return;

    auto arity = [&](std::size_t n) {
      bool ok = P.size() == n;
      S(ok, std::to_string(n) + " premise(s)");
      return ok;
    };
    auto sameCtx = [&](const Derivation& p) { S(p.conclusion.ctx == J.ctx, "premise context " + J.ctx.str()); };
    auto equalDist = [&](const DistExpr& expected, const std::string& name) {
      r.add(name, distEqual(J.dist, expected, J.ctx, J.type, path + "/" + name), {{"expected", expected.str()}});
    };
    using TK = Term::Kind;

    switch (rule) {
      case Rule::Lit: {
        if (!arity(0)) return;
        bool ok = J.left.kind() == TK::Const && J.right.kind() == TK::Const && J.type.isReal();
        S(ok, "literals at Real");
        if (!ok) return;
        double gap = std::fabs(J.left.value() - J.right.value());
        if (J.dist.kind() == DistExpr::Kind::Const) {
          double a = J.dist.value();
          bool eq = a == gap || std::fabs(a - gap) <= opts.tol;
          r.add("side: a = |x - y|", eq ? Verdict::proved() : Verdict::refuted({{"a", a}, {"gap", gap}}),
                {{"evidence", "exact"}});
        } else {
          equalDist(DistExpr::constant(gap), "side: a = |x - y|");
        }
        return;
      }
      case Rule::Var: {
        if (!arity(0)) return;
        bool ok = J.left.kind() == TK::Var && J.right.kind() == TK::Var && J.left.name() == J.right.name();
        S(ok, "the same variable on both sides");
        if (!ok) return;
        auto i = J.ctx.lookup(J.left.name());
        S(i && J.ctx[*i].type == J.type, "variable declared at " + J.type.str());
        equalDist(DistExpr::var(J.left.name()), "side: a = xi|_i");
        return;
      }
      case Rule::Prim: {
        bool ok = J.left.kind() == TK::PrimApp && J.right.kind() == TK::PrimApp && J.left.prim() == J.right.prim() &&
                  J.type.isReal();
        S(ok, "primitive applications of the same primitive");
        if (!ok || !arity(J.left.args().size())) return;
        std::vector<DistExpr> radii;
        for (std::size_t i = 0; i < P.size(); ++i) {
          const auto& c = P[i].conclusion;
          sameCtx(P[i]);
          S(c.type.isReal(), "premise " + std::to_string(i) + " at Real");
          S(alphaEqual(c.left, J.left.args()[i]) && alphaEqual(c.right, J.right.args()[i]),
            "premise " + std::to_string(i) + " relates the arguments");
          radii.push_back(c.dist);
        }
        equalDist(DistExpr::primMod(J.left.prim(), J.left.args(), radii), "side: b = alpha-bullet");
        return;
      }
      case Rule::Lam: {
        if (!arity(1)) return;
        bool ok = J.left.kind() == TK::Lam && J.right.kind() == TK::Lam && J.left.binder() == J.right.binder() &&
                  J.type.isArrow();
        S(ok, "abstractions over the same binder");
        if (!ok) return;
        const auto& c = P[0].conclusion;
        const SimpleType& A = J.type.dom();
        for (const Term* t : {&J.left, &J.right})
          S(!t->annot() || *t->annot() == A, "binder annotated " + A.str());
        S(c.ctx == J.ctx.extended(J.left.binder(), A), "premise context extended by " + J.left.binder());
        S(c.type == J.type.cod(), "premise at " + J.type.cod().str());
        S(alphaEqual(c.left, J.left.body()) && alphaEqual(c.right, J.right.body()), "premise relates the bodies");
        equalDist(DistExpr::lam(J.left.binder(), A, c.dist), "side: b(g, x)(v, a') = a(g::v, x::a')");
        return;
      }
      case Rule::App: {
        if (!arity(2)) return;
        const auto& f = P[0].conclusion;
        const auto& a = P[1].conclusion;
        sameCtx(P[0]);
        sameCtx(P[1]);
        bool ok = J.left.kind() == TK::App && J.right.kind() == TK::App;
        S(ok, "applications on both sides");
        if (!ok) return;
        S(f.type == SimpleType::arrow(a.type, J.type), "function premise at " + a.type.str() + " -> " + J.type.str());
        S(alphaEqual(f.left, J.left.fn()) && alphaEqual(f.right, J.right.fn()), "function premise relates the heads");
        S(alphaEqual(a.left, J.left.arg()) && alphaEqual(a.right, J.right.arg()), "argument premise relates the arguments");
        equalDist(DistExpr::app(f.dist, J.left.arg(), a.dist), "side: c = a(g, x)([[p]] g, b(g, x))");
        return;
      }
      case Rule::Pair: {
        if (!arity(2)) return;
        const auto& l = P[0].conclusion;
        const auto& rr = P[1].conclusion;
        sameCtx(P[0]);
        sameCtx(P[1]);
        bool ok = J.left.kind() == TK::Pair && J.right.kind() == TK::Pair;
        S(ok, "pairs on both sides");
        if (!ok) return;
        S(J.type == SimpleType::prod(l.type, rr.type), "product of the premise types");
        S(alphaEqual(l.left, J.left.left()) && alphaEqual(l.right, J.right.left()) &&
              alphaEqual(rr.left, J.left.right()) && alphaEqual(rr.right, J.right.right()),
          "premises relate the components");
        equalDist(DistExpr::pair(l.dist, rr.dist), "side: <a, b>");
        return;
      }
      case Rule::Fst:
      case Rule::Snd: {
        if (!arity(1)) return;
        const auto& c = P[0].conclusion;
        sameCtx(P[0]);
        bool first = rule == Rule::Fst;
        TK k = first ? TK::Fst : TK::Snd;
        bool ok = J.left.kind() == k && J.right.kind() == k && c.type.isProd();
        S(ok, "projections of a product");
        if (!ok) return;
        S(J.type == (first ? c.type.left() : c.type.right()), "projected type");
        S(alphaEqual(c.left, J.left.operand()) && alphaEqual(c.right, J.right.operand()), "premise relates the operands");
        DistExpr expected = first ? DistExpr::fst(c.dist) : DistExpr::snd(c.dist);
        if (c.dist.kind() == DistExpr::Kind::Pair && J.dist == c.dist.kids()[first ? 0 : 1]) expected = J.dist;
        equalDist(expected, first ? "side: a from <a, b>" : "side: b from <a, b>");
        return;
      }
      case Rule::SemReplace: {
        if (!arity(1)) return;
        const auto& c = P[0].conclusion;
        sameCtx(P[0]);
        S(c.type == J.type, "premise at " + J.type.str());
        equalDist(c.dist, "side: same distance");
        auto [vl, pl] = semEqual(c.left, J.left, J.ctx, J.type, path + "/left");
        r.add("side: [[t]] = [[p]]", vl, {{"evidence", pl}});
        auto [vr, pr] = semEqual(c.right, J.right, J.ctx, J.type, path + "/right");
        r.add("side: [[s]] = [[q]]", vr, {{"evidence", pr}});
        return;
      }
      case Rule::Weaken: {
        if (!arity(1)) return;
        const auto& c = P[0].conclusion;
        sameCtx(P[0]);
        S(c.type == J.type && alphaEqual(c.left, J.left) && alphaEqual(c.right, J.right), "same terms and type");
        bool exact = J.ctx.empty() && J.type.isReal();
        r.add("side: b below a", distLeq(J.dist, c.dist, J.ctx, J.type, path + "/weaken"),
              {{"evidence", exact ? "exact" : "sampled"}, {"b", J.dist.str()}, {"a", c.dist.str()}});
        return;
      }
      case Rule::Join: {
        S(!P.empty(), "at least one premise");
        if (P.empty()) return;
        std::vector<DistExpr> family;
        for (std::size_t i = 0; i < P.size(); ++i) {
          const auto& c = P[i].conclusion;
          sameCtx(P[i]);
          S(c.type == J.type && alphaEqual(c.left, J.left) && alphaEqual(c.right, J.right),
            "premise " + std::to_string(i) + " has the same terms");
          family.push_back(c.dist);
        }
        DistExpr expected = family.size() == 1 ? family[0] : DistExpr::join(J.type, family);
        equalDist(expected, "side: a = join a_i");
        return;
      }
      case Rule::Trans: {
        if (!arity(2)) return;
        const auto& a = P[0].conclusion;
        const auto& b = P[1].conclusion;
        sameCtx(P[0]);
        sameCtx(P[1]);
        S(a.type == J.type && b.type == J.type, "premises at " + J.type.str());
        S(alphaEqual(a.right, b.left), "premises share the middle term");
        S(alphaEqual(a.left, J.left) && alphaEqual(b.right, J.right), "outer terms match");
        equalDist(DistExpr::tensor(J.type, a.dist, b.dist), "side: a + b");
        return;
      }
      case Rule::QRefl: {
        if (!arity(1)) return;
        const auto& c = P[0].conclusion;
        sameCtx(P[0]);
        S(c.type == J.type && alphaEqual(c.left, J.left) && alphaEqual(c.left, J.right), "conclusion (t, a, t)");
        equalDist(c.dist, "side: same distance");
        return;
      }
    }
  }
};

}  // namespace

Verdict distanceEqual(const DistExpr& a, const DistExpr& b, const TypingContext& ctx, const SimpleType& type,
                      const Semantics& sem, const QetOptions& opts) {
  return Checker{sem, opts}.distEqual(a, b, ctx, type, "distance-equal");
}

DerivationReport checkDerivation(const Derivation& d, const Semantics& sem, const QetOptions& opts) {
  DerivationReport rep;
  Checker{sem, opts}.check(d, "root", rep.nodes);
  rep.verdict = Verdict::proved();
  for (const auto& n : rep.nodes) rep.verdict &= n.checks.overall();
  return rep;
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

Derivation node(Rule rule, std::vector<Derivation> premises, Judgment j) {
  return Derivation{rule, std::move(premises), std::move(j), nullptr};
}

Derivation reflRec(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims) {
  SimpleType type = typecheck(ctx, t, prims);
  using TK = Term::Kind;
  switch (t.kind()) {
    case TK::Var:
      return node(Rule::Var, {}, {ctx, t, DistExpr::var(t.name()), t, type});
    case TK::Const:
      return node(Rule::Lit, {}, {ctx, t, DistExpr::constant(0.0), t, type});
    case TK::PrimApp: {
      std::vector<Derivation> ps;
      std::vector<DistExpr> radii;
      for (const auto& a : t.args()) {
        ps.push_back(reflRec(ctx, a, prims));
        radii.push_back(ps.back().conclusion.dist);
      }
      DistExpr dist = DistExpr::primMod(t.prim(), t.args(), radii);
      return node(Rule::Prim, std::move(ps), {ctx, t, dist, t, type});
    }
    case TK::Lam: {
      const SimpleType& A = type.dom();
      Derivation body = reflRec(ctx.extended(t.binder(), A), t.body(), prims);
      DistExpr dist = DistExpr::lam(t.binder(), A, body.conclusion.dist);
      return node(Rule::Lam, {std::move(body)}, {ctx, t, dist, t, type});
    }
    case TK::App: {
      Derivation f = reflRec(ctx, t.fn(), prims);
      Derivation a = reflRec(ctx, t.arg(), prims);
      DistExpr dist = DistExpr::app(f.conclusion.dist, t.arg(), a.conclusion.dist);
      return node(Rule::App, {std::move(f), std::move(a)}, {ctx, t, dist, t, type});
    }
    case TK::Pair: {
      Derivation l = reflRec(ctx, t.left(), prims);
      Derivation r = reflRec(ctx, t.right(), prims);
      DistExpr dist = DistExpr::pair(l.conclusion.dist, r.conclusion.dist);
      return node(Rule::Pair, {std::move(l), std::move(r)}, {ctx, t, dist, t, type});
    }
    case TK::Fst:
    case TK::Snd: {
      Derivation p = reflRec(ctx, t.operand(), prims);
      bool first = t.kind() == TK::Fst;
      DistExpr dist = first ? DistExpr::fst(p.conclusion.dist) : DistExpr::snd(p.conclusion.dist);
      return node(first ? Rule::Fst : Rule::Snd, {std::move(p)}, {ctx, t, dist, t, type});
    }
  }
  throw std::logic_error("unknown term");
}

}  // namespace

Derivation reflexivityDerivation(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims) {
  return reflRec(ctx, elaborate(ctx, t, prims), prims);
}

namespace {

struct Substituter {
  std::size_t n;
  std::string x;
  SimpleType A;

  DistExpr dist(const DistExpr& e, const Term& p, const DistExpr& b) const {
    using K = DistExpr::Kind;
    auto all = [&](const std::vector<DistExpr>& v) {
      std::vector<DistExpr> out;
      for (const auto& k : v) out.push_back(dist(k, p, b));
      return out;
    };
    switch (e.kind()) {
      case K::Const:
        return e;
      case K::Var:
        return e.name() == x ? b : e;
      case K::PrimMod: {
        std::vector<Term> args;
        for (const auto& t : e.terms()) args.push_back(substitute(t, x, p));
        return DistExpr::primMod(e.prim(), args, all(e.kids()));
      }
      case K::App:
        return DistExpr::app(dist(e.kids()[0], p, b), substitute(e.terms()[0], x, p), dist(e.kids()[1], p, b));
      case K::Lam:
        return DistExpr::lam(e.name(), e.type(), dist(e.kids()[0], p, b));
      case K::Pair:
        return DistExpr::pair(dist(e.kids()[0], p, b), dist(e.kids()[1], p, b));
      case K::Fst:
        return DistExpr::fst(dist(e.kids()[0], p, b));
      case K::Snd:
        return DistExpr::snd(dist(e.kids()[0], p, b));
      case K::Tensor:
        return DistExpr::tensor(e.type(), dist(e.kids()[0], p, b), dist(e.kids()[1], p, b));
      case K::Meet:
        return DistExpr::meet(e.type(), all(e.kids()));
      case K::Join:
        return DistExpr::join(e.type(), all(e.kids()));
      case K::Deriv:
      case K::Subst:
        return DistExpr::subst(e, n, x, A, p, b);
    }
    throw std::logic_error("unknown distance node");
  }

  Judgment judgment(const Judgment& J, const Judgment& d2, bool leftOnly) const {
    return Judgment{J.ctx.without(n), substitute(J.left, x, d2.left), dist(J.dist, d2.left, d2.dist),
                    substitute(leftOnly ? J.left : J.right, x, d2.right), J.type};
  }

  void align(const Derivation& d) const {
    const auto& ctx = d.conclusion.ctx;
    if (ctx.size() <= n || ctx[n].name != x || ctx[n].type != A)
      throw std::invalid_argument("context misalignment: expected " + x + " : " + A.str() + " at position " +
                                  std::to_string(n) + " in " + ctx.str());
    if (!ctx.hasDistinctNames())
      throw std::invalid_argument("context misalignment: repeated names in " + ctx.str());
  }

  static DistExpr shift(const DistExpr& e, std::size_t k) {
    using K = DistExpr::Kind;
    bool touches = false;
    std::vector<DistExpr> kids;
    for (const auto& c : e.kids()) {
      kids.push_back(shift(c, k));
      touches = touches || !(kids.back() == c);
    }
    if (e.kind() == K::Subst)
      return DistExpr::subst(kids[0], e.position() + k, e.name(), e.type(), e.terms()[0], e.kids()[1]);
    if (!touches) return e;
    switch (e.kind()) {
      case K::PrimMod:
        return DistExpr::primMod(e.prim(), e.terms(), kids);
      case K::App:
        return DistExpr::app(kids[0], e.terms()[0], kids[1]);
      case K::Lam:
        return DistExpr::lam(e.name(), e.type(), kids[0]);
      case K::Pair:
        return DistExpr::pair(kids[0], kids[1]);
      case K::Fst:
        return DistExpr::fst(kids[0]);
      case K::Snd:
        return DistExpr::snd(kids[0]);
      case K::Tensor:
        return DistExpr::tensor(e.type(), kids[0], kids[1]);
      case K::Meet:
        return DistExpr::meet(e.type(), kids);
      case K::Join:
        return DistExpr::join(e.type(), kids);
      default:
        return e;
    }
  }

  // The closed derivation d2 read in context prefix ++ (its own context).
  static Derivation recontext(const Derivation& d, const TypingContext& prefix) {
    Derivation out = d;
    auto entries = prefix.entries();
    for (const auto& e : d.conclusion.ctx.entries()) entries.push_back(e);
    out.conclusion.ctx = TypingContext(std::move(entries));
    out.conclusion.dist = shift(d.conclusion.dist, prefix.size());
    for (auto& p : out.premises) p = recontext(p, prefix);
    return out;
  }

  static Derivation qrefl(const Derivation& d) {
    const auto& c = d.conclusion;
    return node(Rule::QRefl, {d}, {c.ctx, c.left, c.dist, c.left, c.type});
  }

  // (t[p/x], c, s[q/x]).
  Derivation sameSides(const Derivation& d, const Derivation& d2) const {
    align(d);
    const Judgment& J = d.conclusion;
    Judgment out = judgment(J, d2.conclusion, false);
    switch (d.rule) {
      case Rule::Var:
        if (J.left.name() == x) return recontext(d2, out.ctx);
        return node(Rule::Var, {}, out);
      case Rule::Lit:
        return node(Rule::Lit, {}, out);
      case Rule::Trans:
        return node(Rule::Trans, {sameSides(d.premises.at(0), qrefl(d2)), sameSides(d.premises.at(1), d2)}, out);
      case Rule::QRefl:
        return leftOnly(d.premises.at(0), d2);
      default: {
        std::vector<Derivation> ps;
        for (const auto& p : d.premises) ps.push_back(sameSides(p, d2));
        return node(d.rule, std::move(ps), out);
      }
    }
  }

  // (t[p/x], c, t[q/x]).
  Derivation leftOnly(const Derivation& d, const Derivation& d2) const {
    align(d);
    const Judgment& J = d.conclusion;
    Judgment out = judgment(J, d2.conclusion, true);
    switch (d.rule) {
      case Rule::Var:
        if (J.left.name() == x) return recontext(d2, out.ctx);
        return node(Rule::Var, {}, out);
      case Rule::Lit: {
        Derivation zero = node(Rule::Lit, {}, {out.ctx, out.left, DistExpr::constant(0.0), out.left, out.type});
        return node(Rule::Weaken, {std::move(zero)}, out);
      }
      case Rule::Trans:
        return node(Rule::Weaken, {leftOnly(d.premises.at(0), d2)}, out);
      case Rule::QRefl:
        return leftOnly(d.premises.at(0), d2);
      default: {
        std::vector<Derivation> ps;
        for (const auto& p : d.premises) ps.push_back(leftOnly(p, d2));
        return node(d.rule, std::move(ps), out);
      }
    }
  }
};

}  // namespace

SubstitutionResult substitutionDerivation(const Derivation& d1, const Derivation& d2, const std::string& x) {
  const auto& ctx = d1.conclusion.ctx;
  if (!d2.conclusion.ctx.empty()) throw std::invalid_argument("context misalignment: the substituted derivation must be closed");
  auto n = ctx.lookup(x);
  if (!n) throw std::invalid_argument("context misalignment: " + x + " not in " + ctx.str());
  if (ctx[*n].type != d2.conclusion.type)
    throw std::invalid_argument("context misalignment: " + x + " : " + ctx[*n].type.str() + " but the closed derivation is at " +
                                d2.conclusion.type.str());
  Substituter s{*n, x, ctx[*n].type};
  const auto& J2 = d2.conclusion;
  DistExpr c = DistExpr::subst(d1.conclusion.dist, *n, x, s.A, J2.left, J2.dist);
  return SubstitutionResult{s.sameSides(d1, d2), s.leftOnly(d1, d2), c};
}

namespace {

Verdict groundBound(const SimpleType& type, const SemValue& t, const SemValue& s, const QuantaleValue& a, double tol,
                    const std::string& where) {
  if (type.isReal()) {
    double gap = std::fabs(t.asReal() - s.asReal());
    double bound = a.asScalar();
    if (gap <= bound + tol) return Verdict::proved();
    return Verdict::refuted({{"component", where}, {"gap", gap}, {"bound", bound}});
  }
  if (type.isProd()) {
    Verdict v = groundBound(type.left(), t.first(), s.first(), a.first(), tol, where + ".1");
    if (v.isRefuted()) return v;
    return groundBound(type.right(), t.second(), s.second(), a.second(), tol, where + ".2");
  }
  throw std::invalid_argument("soundness is checked at ground types only");
}

}  // namespace

Verdict groundSoundness(const Judgment& j, const Semantics& sem, double tol) {
  if (!j.ctx.empty()) throw std::invalid_argument("soundness is checked on closed judgments");
  auto a = evalDist(j.dist, {}, {}, {}, sem);
  Verdict v = groundBound(j.type, sem.evalClosed(j.left), sem.evalClosed(j.right), a, tol, "root");
  if (v.isRefuted()) v.witness["judgment"] = j.str();
  return v;
}

// ---------------------------------------------------------------------------
// Random derivations

namespace {

struct Generator {
  Rng& rng;
  const PrimitiveTable& prims;
  std::vector<std::string> unary, binary;

  Generator(Rng& r, const PrimitiveTable& p) : rng(r), prims(p) {
    for (const auto& name : prims.names()) {
      const auto& prim = prims.at(name);
      if (!prim.modulus) continue;
      if (prim.arity == 1) unary.push_back(name);
      if (prim.arity == 2) binary.push_back(name);
    }
  }

  static Judgment closed(Term l, DistExpr d, Term r) { return Judgment{{}, std::move(l), std::move(d), std::move(r), SimpleType::real()}; }

  double literal() { return std::round(rng.uniform(-3.0, 3.0) * 1000.0) / 1000.0; }

  Derivation lit(double x, double y) {
    return node(Rule::Lit, {}, closed(Term::constant(x), DistExpr::constant(std::fabs(x - y)), Term::constant(y)));
  }

  Derivation freshLit() {
    double x = literal();
    double y = rng.coin(0.3) ? x : std::round((x + rng.uniform(-0.5, 0.5)) * 1000.0) / 1000.0;
    return lit(x, y);
  }

  Derivation prim(std::size_t depth) {
    bool useBinary = !binary.empty() && (unary.empty() || rng.coin(0.4));
    const auto& pool = useBinary ? binary : unary;
    PrimRef ref{pool[rng.index(pool.size())], std::nullopt};
    std::vector<Derivation> ps;
    std::vector<Term> ls, rs;
    std::vector<DistExpr> radii;
    for (std::size_t i = 0; i < (useBinary ? 2u : 1u); ++i) {
      ps.push_back(gen(depth - 1));
      ls.push_back(ps.back().conclusion.left);
      rs.push_back(ps.back().conclusion.right);
      radii.push_back(ps.back().conclusion.dist);
    }
    Judgment j = closed(Term::primApp(ref, ls), DistExpr::primMod(ref, ls, radii), Term::primApp(ref, rs));
    return node(Rule::Prim, std::move(ps), j);
  }

  // (s, b, s') with s' a perturbation of s along its literals.
  Derivation mirror(const Term& s) {
    if (s.kind() == Term::Kind::Const) {
      double y = std::round((s.value() + rng.uniform(-0.25, 0.25)) * 1000.0) / 1000.0;
      return lit(s.value(), y);
    }
    if (s.kind() == Term::Kind::PrimApp && prims.at(s.prim().name).modulus) {
      std::vector<Derivation> ps;
      std::vector<Term> rs;
      std::vector<DistExpr> radii;
      for (const auto& a : s.args()) {
        ps.push_back(mirror(a));
        rs.push_back(ps.back().conclusion.right);
        radii.push_back(ps.back().conclusion.dist);
      }
      Judgment j = closed(s, DistExpr::primMod(s.prim(), s.args(), radii), Term::primApp(s.prim(), rs));
      return node(Rule::Prim, std::move(ps), j);
    }
    return reflexivityDerivation({}, s, prims);
  }

  Derivation weaken(Derivation p) {
    const auto& c = p.conclusion;
    Judgment j = closed(c.left, DistExpr::tensor(SimpleType::real(), c.dist, DistExpr::constant(literalSlack())), c.right);
    return node(Rule::Weaken, {std::move(p)}, j);
  }

  double literalSlack() { return std::round(rng.uniform(0.0, 1.0) * 1000.0) / 1000.0; }

  Derivation appLam(std::size_t depth) {
    const std::string v = "v";
    Term var = Term::var(v);
    Term body = var;
    if (!binary.empty() && rng.coin(0.5)) {
      PrimRef ref{binary[rng.index(binary.size())], std::nullopt};
      body = Term::primApp(ref, {var, rng.coin(0.5) ? var : Term::constant(literal())});
    } else if (!unary.empty()) {
      PrimRef ref{unary[rng.index(unary.size())], std::nullopt};
      body = Term::primApp(ref, {var});
    }
    Term fn = Term::lam(v, SimpleType::real(), body);
    Derivation lam = reflexivityDerivation({}, fn, prims);
    Derivation arg = gen(depth - 1);
    const auto& a = arg.conclusion;
    Judgment j = closed(Term::app(fn, a.left), DistExpr::app(lam.conclusion.dist, a.left, a.dist), Term::app(fn, a.right));
    return node(Rule::App, {std::move(lam), std::move(arg)}, j);
  }

  Derivation gen(std::size_t depth) {
    if (depth == 0) return freshLit();
    switch (rng.index(8)) {
      case 0:
        return freshLit();
      case 1:
      case 2:
        if (unary.empty() && binary.empty()) return freshLit();
        return prim(depth);
      case 3:
        return weaken(gen(depth - 1));
      case 4: {
        Derivation p1 = gen(depth - 1);
        Derivation p2 = mirror(p1.conclusion.right);
        Judgment j = closed(p1.conclusion.left,
                            DistExpr::tensor(SimpleType::real(), p1.conclusion.dist, p2.conclusion.dist),
                            p2.conclusion.right);
        return node(Rule::Trans, {std::move(p1), std::move(p2)}, j);
      }
      case 5: {
        Derivation p = gen(depth - 1);
        const auto& c = p.conclusion;
        Judgment j = closed(c.left, c.dist, c.left);
        return node(Rule::QRefl, {std::move(p)}, j);
      }
      case 6: {
        Derivation p = gen(depth - 1);
        Derivation w = weaken(p);
        Judgment j = closed(p.conclusion.left, DistExpr::join(SimpleType::real(), {p.conclusion.dist, w.conclusion.dist}),
                            p.conclusion.right);
        return node(Rule::Join, {std::move(p), std::move(w)}, j);
      }
      default: {
        if (rng.coin(0.5)) return appLam(depth);
        Derivation p = gen(depth - 1);
        const auto& c = p.conclusion;
        Term wrapped = Term::app(Term::lam("u", SimpleType::real(), Term::var("u")), c.left);
        Judgment j = closed(wrapped, c.dist, c.right);
        return node(Rule::SemReplace, {std::move(p)}, j);
      }
    }
  }
};

}  // namespace

Derivation randomClosedDerivation(Rng& rng, const PrimitiveTable& prims, std::size_t depth) {
  Generator g(rng, prims);
  return g.gen(depth);
}

Derivation randomClosureStep(Rng& rng, const Derivation& d, const PrimitiveTable& prims) {
  Generator g(rng, prims);
  const auto& c = d.conclusion;
  switch (rng.index(4)) {
    case 0: {
      Derivation w = g.weaken(d);
      w.conclusion.ctx = c.ctx;
      w.conclusion.type = c.type;
      w.conclusion.dist = DistExpr::tensor(c.type, c.dist, DistExpr::constant(g.literalSlack()));
      if (!c.type.isReal()) w.conclusion.dist = c.dist;
      return w;
    }
    case 1: {
      Derivation w = randomClosureStep(rng, d, prims);
      if (!(w.conclusion.left == c.left) || !(w.conclusion.right == c.right)) w = d;
      Judgment j{c.ctx, c.left, DistExpr::join(c.type, {c.dist, w.conclusion.dist}), c.right, c.type};
      return node(Rule::Join, {d, std::move(w)}, j);
    }
    case 2: {
      Derivation r = reflexivityDerivation(c.ctx, c.right, prims);
      Judgment j{c.ctx, c.left, DistExpr::tensor(c.type, c.dist, r.conclusion.dist), c.right, c.type};
      return node(Rule::Trans, {d, std::move(r)}, j);
    }
    default: {
      Judgment j{c.ctx, c.left, c.dist, c.left, c.type};
      return node(Rule::QRefl, {d}, j);
    }
  }
}

}  // namespace qqm
