// qqm: command-line front end. Every command prints a JSON report; the exit
// status is 0 when nothing was refuted, 1 on a refutation, 2 on usage errors.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "qqm/corpus.hpp"
#include "qqm/functions.hpp"
#include "qqm/metrics.hpp"
#include "qqm/parser.hpp"
#include "qqm/qet.hpp"
#include "qqm/suites.hpp"
#include "qqm/typecheck.hpp"
#include "qqm/workbench.hpp"

using namespace qqm;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  return s;
}

/// Numbers, "inf", multiples of pi ("pi", "2pi", "-0.5*pi") and quotients ("pi/2").
double parseScalar(const std::string& raw) {
  std::string s = trim(raw);
  if (s == "inf" || s == "+inf") return kInf;
  if (auto slash = s.find('/'); slash != std::string::npos)
    return parseScalar(s.substr(0, slash)) / parseScalar(s.substr(slash + 1));
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = s.substr(0, s.size() - 2);
    if (!s.empty() && s.back() == '*') s.pop_back();
    if (s.empty() || s == "+") return factor;
    if (s == "-") return -factor;
  }
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw UsageError("not a number: " + raw);
  return v * factor;
}

// Splits "a=1,b=dist(f,g)" at top-level commas.
std::vector<std::pair<std::string, std::string>> parseAssignments(const std::string& s) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    int depth = 0;
    while (j < s.size() && !(s[j] == ',' && depth == 0)) {
      if (s[j] == '(') ++depth;
      if (s[j] == ')') --depth;
      ++j;
    }
    std::string item = s.substr(i, j - i);
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected name=value, got " + item);
    out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    i = j + 1;
  }
  return out;
}

const SimpleType kReal = SimpleType::real();
const SimpleType kRR = SimpleType::arrow(SimpleType::real(), SimpleType::real());

SemValue parseValue(const SimpleType& type, const std::string& s) {
  if (type == kReal) return SemValue::real(parseScalar(s));
  if (type == kRR) return libraryFunction(trim(s));
  throw UsageError("values of type " + type.str() + " cannot be given on the command line");
}

// Radius syntax: a number at Real; at Real -> Real, dist(f,g), self(f) or a
// constant error function given by a number.
QuantaleValue parseRadius(const SimpleType& type, const std::string& raw) {
  std::string s = trim(raw);
  if (type == kReal) return QuantaleValue::scalar(parseScalar(s));
  if (type == kRR) {
    auto open = s.find('(');
    if (open != std::string::npos && s.back() == ')') {
      std::string head = s.substr(0, open);
      std::string inner = s.substr(open + 1, s.size() - open - 2);
      if (head == "self") {
        auto f = libraryFunction(trim(inner));
        return exactArrowDistance(f, f);
      }
      if (head == "dist") {
        auto comma = inner.find(',');
        if (comma == std::string::npos) throw UsageError("dist needs two functions: " + s);
        return exactArrowDistance(libraryFunction(trim(inner.substr(0, comma))),
                                  libraryFunction(trim(inner.substr(comma + 1))));
      }
    }
    double c = parseScalar(s);
    return QuantaleValue::errFun([c](const SemValue&, const QuantaleValue&) { return QuantaleValue::scalar(c); },
                                 "const(" + formatReal(c) + ")");
  }
  throw UsageError("radii of type " + type.str() + " cannot be given on the command line");
}

struct Loaded {
  TypingContext ctx;
  Term term;
  std::string name;
};

// corpus:<name>, @<file>, or literal syntax.
Loaded loadTerm(const std::string& spec, const std::string& context, const RunConfig& cfg, const PrimitiveTable& prims) {
  if (spec.rfind("corpus:", 0) == 0) {
    Corpus c = Corpus::select(cfg.corpus, prims);
    const auto& e = c.at(spec.substr(7));
    return {context.empty() ? e.ctx : parseContext(context), e.term, e.name};
  }
  std::string source = spec;
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw UsageError("cannot open " + spec.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    source = ss.str();
  }
  TypingContext ctx = parseContext(context);
  return {ctx, elaborate(ctx, parseTerm(source), prims), ""};
}

// Values for every context entry, by name or else by position.
template <class T, class Parse>
std::vector<T> bindContext(const TypingContext& ctx, const std::string& spec, Parse parse, const char* what) {
  auto items = spec.empty() ? std::vector<std::pair<std::string, std::string>>{} : parseAssignments(spec);
  bool byName = true;
  for (const auto& [k, v] : items) byName = byName && ctx.lookup(k).has_value();
  if (items.size() != ctx.size())
    throw UsageError(std::string(what) + " needs " + std::to_string(ctx.size()) + " entries for context " + ctx.str());
  std::vector<T> out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    std::string v;
    if (byName) {
      for (const auto& [k, val] : items)
        if (k == ctx[i].name) v = val;
    } else {
      v = items[i].second;
    }
    out.push_back(parse(ctx[i].type, v));
  }
  return out;
}

Json valueJson(const SemValue& v) {
  if (v.isReal()) return formatReal(v.asReal());
  return v.str();
}

Json quantaleJson(const QuantaleValue& v) {
  if (v.isScalar()) return formatReal(v.asScalar());
  return v.str();
}

int emit(const std::string& command, const RunConfig& cfg, const Verdict& verdict, Json result) {
  Json report = makeReport(command, cfg, verdict, std::move(result));
  std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out);
    if (!out) throw UsageError("cannot write " + cfg.out);
    out << text;
  }
  return verdict.isRefuted() ? 1 : 0;
}

std::vector<Axiom> parseAxioms(const std::string& s) {
  if (s == "all") return allAxioms();
  std::vector<Axiom> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(axiomFromString(trim(item)));
  return out;
}

// A space path, falling back to the bundled data directory.
FiniteQqmSpace loadSpace(const std::string& path) {
  std::ifstream probe(path);
  if (probe) return FiniteQqmSpace::load(path);
  std::string base = path.substr(path.find_last_of('/') + 1);
  std::string bundled = std::string(QQM_DATA_DIR) + "/spaces/" + base;
  std::ifstream again(bundled);
  if (again) return FiniteQqmSpace::load(bundled);
  throw UsageError("cannot open space " + path);
}

Json relationJson(const FiniteQqmSpace& s) {
  Json out = Json::object();
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y) out[s.label(x)][s.label(y)] = s.q().name(s.hat(x, y));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg.applyEnvironment();
  } catch (const std::exception& e) {
    std::cerr << "qqm: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"quantitative semantics workbench for a simply typed calculus over the reals"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string caps;
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--tol", cfg.exactTol, "slack tolerance for exact comparisons");
  app.add_option("--grid-tol", cfg.gridTol, "tolerance of grid estimates");
  app.add_option("--grid", cfg.gridResolution, "points of one-dimensional sup grids");
  app.add_option("--caps", caps, "enumeration caps, e.g. carrier=4,quantale=5");
  app.add_option("--prims", cfg.prims, "primitive table: default, empty or a manifest file");
  app.add_option("--epsilon", cfg.epsilon, "default parameter of add and diff");
  app.add_option("--corpus", cfg.corpus, "corpus: default, pure or a corpus file");
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  app.add_option("--samples", cfg.samples, "samples per term or per random suite");
  app.add_option("--workers", cfg.workers, "worker threads (0: all cores)");

  std::string term, context, point, radius, type, left, right, at, rad, dom, file, space, space2, axioms, construct,
      mine, only, emit_refl, golden;
  std::size_t shadows = 0;

  auto* typecheckCmd = app.add_subcommand("typecheck", "print the type of a term");
  typecheckCmd->add_option("--term", term, "term, corpus:<name> or @file")->required();
  typecheckCmd->add_option("--context", context, "typing context, e.g. \"f: Real -> Real, x: Real\"");

  auto* evalCmd = app.add_subcommand("eval", "evaluate a term at a point");
  evalCmd->add_option("--term", term)->required();
  evalCmd->add_option("--context", context);
  evalCmd->add_option("--point", point, "values, e.g. f=sin,x=0");

  auto* deriveCmd = app.add_subcommand("derive", "the derivative of a term at a point and radius");
  deriveCmd->add_option("--term", term)->required();
  deriveCmd->add_option("--context", context);
  deriveCmd->add_option("--point", point);
  deriveCmd->add_option("--radius", radius, "radii, e.g. d=self(sin),a=0.01");

  auto* distanceCmd = app.add_subcommand("distance", "rho-hat between two values");
  distanceCmd->add_option("--type", type)->default_val("Real -> Real");
  distanceCmd->add_option("--left", left)->required();
  distanceCmd->add_option("--right", right)->required();
  distanceCmd->add_option("--at", at, "probe point at arrow types");
  distanceCmd->add_option("--radius", rad, "probe radius at arrow types");

  auto* memberCmd = app.add_subcommand("member", "is (x, a, y) in the relation");
  memberCmd->add_option("--type", type)->default_val("Real -> Real");
  memberCmd->add_option("--left", left)->required();
  memberCmd->add_option("--radius", rad)->required();
  memberCmd->add_option("--right", right)->required();

  auto* selfdistCmd = app.add_subcommand("selfdist", "self-distance of a value and the self-distance lemma");
  selfdistCmd->add_option("--type", type)->default_val("Real -> Real");
  selfdistCmd->add_option("--value", left)->required();
  selfdistCmd->add_option("--at", at);
  selfdistCmd->add_option("--radius", rad);

  auto* bound2Cmd = app.add_subcommand("bound2", "two-term bound for closed t, s : A -> Real");
  bound2Cmd->add_option("--left", left)->required();
  bound2Cmd->add_option("--right", right)->required();
  bound2Cmd->add_option("--dom", dom)->default_val("Real");
  bound2Cmd->add_option("--at", at)->required();
  bound2Cmd->add_option("--radius", rad)->required();

  auto* fundamentalCmd = app.add_subcommand("check-fundamental", "the fundamental lemma on the corpus");
  fundamentalCmd->add_option("--term", only, "only this corpus entry");

  auto* qetCmd = app.add_subcommand("check-qet", "reflexivity, soundness and substitution for derivations");

  auto* workbenchCmd = app.add_subcommand("workbench", "finite spaces: axioms, constructions, mining");
  workbenchCmd->add_option("--space", space, "space file");
  workbenchCmd->add_option("--space2", space2, "second space for binary constructions");
  workbenchCmd->add_option("--axioms", axioms, "comma-separated axioms or all");
  workbenchCmd->add_option("--construct", construct, "product, exponential, coproduct, terminal or closure");
  workbenchCmd->add_option("--mine", mine, "HOLDS:FAILS, search Lawvere relations separating two axioms");
  workbenchCmd->add_option("--shadows", shadows, "run the random theorem-shadow suite with this many trials");
  workbenchCmd->add_option("--golden", golden, "also write the constructed space to this file");

  auto* proveCmd = app.add_subcommand("prove", "check a derivation file");
  proveCmd->add_option("file", file, "derivation JSON");
  proveCmd->add_option("--emit-reflexivity", emit_refl, "print the reflexivity derivation of a term instead");
  proveCmd->add_option("--context", context);

  app.add_subcommand("demo-no-greatest", "replay the no-greatest-relation argument (empty primitive table)");
  app.add_subcommand("demo-bound-sweep", "the finite-difference bound as epsilon shrinks");

  try {
    app.parse(argc, argv);
    if (!caps.empty()) cfg.applyCaps(caps);
    cfg.validate();
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "qqm: " << e.what() << "\n";
    return 2;
  }

  auto* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    PrimitiveTable prims = cfg.primitiveTable();
    Semantics sem(prims);

    if (name == "typecheck") {
      auto l = loadTerm(term, context, cfg, prims);
      SimpleType t = typecheck(l.ctx, l.term, prims);
      return emit(name, cfg, Verdict::proved(), {{"term", l.term.str()}, {"context", l.ctx.str()}, {"type", t.str()}});
    }
    if (name == "eval" || name == "derive") {
      auto l = loadTerm(term, context, cfg, prims);
      SimpleType t = typecheck(l.ctx, l.term, prims);
      auto gamma = bindContext<SemValue>(l.ctx, point, parseValue, "--point");
      Json result{{"term", l.term.str()}, {"context", l.ctx.str()}, {"type", t.str()}, {"point", point}};
      if (name == "eval") {
        result["value"] = valueJson(sem.eval(l.ctx, l.term, gamma));
        return emit(name, cfg, Verdict::proved(), result);
      }
      auto xi = bindContext<QuantaleValue>(l.ctx, radius, parseRadius, "--radius");
      auto d = sem.derive(l.ctx, l.term, gamma, xi);
      result["radius"] = radius;
      result["bound"] = quantaleJson(d);
      result["mode"] = toString(sem.options().mode);
      result["samples"] = 0;
      return emit(name, cfg, Verdict::proved(), result);
    }
    if (name == "distance") {
      SimpleType t = parseType(type);
      SamplerConfig sc = cfg.sampler();
      if (t.isArrow()) {
        if (at.empty() || rad.empty()) throw UsageError("distance at arrow types needs --at and --radius");
        SemValue x = parseValue(t.dom(), at);
        QuantaleValue a = parseRadius(t.dom(), rad);
        auto est = rhoHatArrow(t, parseValue(t, left), parseValue(t, right), x, a, sc, cfg.distanceOptions());
        Json r = est.toJson();
        r["left"] = left;
        r["right"] = right;
        r["at"] = valueJson(x);
        r["probeRadius"] = quantaleJson(a);
        Verdict v = est.mode == "exact" ? Verdict::proved() : Verdict::sampledOk(std::max<std::size_t>(est.samples, 1));
        return emit(name, cfg, v, r);
      }
      auto d = rhoHat(t, parseValue(t, left), parseValue(t, right), sc, cfg.distanceOptions());
      return emit(name, cfg, Verdict::proved(), {{"left", left}, {"right", right}, {"value", quantaleJson(d)}, {"mode", "exact"}});
    }
    if (name == "member") {
      SimpleType t = parseType(type);
      Verdict v = member(t, parseValue(t, left), parseRadius(t, rad), parseValue(t, right), cfg.sampler());
      return emit(name, cfg, v, {{"type", t.str()}, {"left", left}, {"radius", rad}, {"right", right}, {"member", v.ok()}});
    }
    if (name == "selfdist") {
      SimpleType t = parseType(type);
      SemValue f = parseValue(t, left);
      auto sigma = selfDistance(t, f, cfg.sampler(), cfg.distanceOptions());
      Json r{{"type", t.str()}, {"value", left}};
      Verdict v = Verdict::proved();
      if (t.isArrow()) {
        if (!at.empty() && !rad.empty()) {
          auto y = parseValue(t.dom(), at);
          auto a = parseRadius(t.dom(), rad);
          r["at"] = valueJson(y);
          r["probeRadius"] = quantaleJson(a);
          r["sigma"] = quantaleJson(sigma.apply(y, a));
        }
        v = checkSelfDistanceLemma(t, f, cfg.sampler(), cfg.gridTol, cfg.distanceOptions());
        r["lemma"] = toJson(v);
      } else {
        r["sigma"] = quantaleJson(sigma);
      }
      return emit(name, cfg, v, r);
    }
    if (name == "bound2") {
      SimpleType d = parseType(dom);
      auto b = twoTermBound(sem, parseTerm(left), parseTerm(right), d, parseValue(d, at), parseRadius(d, rad),
                            cfg.sampler());
      return emit(name, cfg, b.membership, b.toJson());
    }
    if (name == "check-fundamental") {
      Corpus c = Corpus::select(cfg.corpus, prims);
      auto r = fundamentalSuite(c, sem, cfg, only);
      return emit(name, cfg, r.verdict, r.details);
    }
    if (name == "check-qet") {
      Corpus c = Corpus::select(cfg.corpus, prims);
      auto r = qetSuite(c, sem, cfg);
      return emit(name, cfg, r.verdict, r.details);
    }
    if (name == "workbench") {
      Json result = Json::object();
      Verdict v = Verdict::proved();
      if (!mine.empty()) {
        auto colon = mine.find(':');
        if (colon == std::string::npos) throw UsageError("--mine takes HOLDS:FAILS");
        auto r = mineSeparation(axiomFromString(mine.substr(0, colon)), axiomFromString(mine.substr(colon + 1)), 3,
                                std::max<std::size_t>(cfg.samples, 1), cfg);
        result["mine"] = r.details;
        v &= r.verdict;
      }
      if (shadows) {
        auto r = theoremShadowSuite(cfg, shadows);
        result["shadows"] = r.details;
        v &= r.verdict;
      }
      if (!construct.empty()) {
        Json c{{"construction", construct}};
        if (construct == "terminal") {
          c["space"] = terminalSpace().toJson();
        } else {
          if (space.empty() || space2.empty()) throw UsageError("--construct " + construct + " needs --space and --space2");
          auto A = loadSpace(space), B = loadSpace(space2);
          if (construct == "product") {
            c["space"] = productSpace(A, B).toJson();
          } else if (construct == "exponential") {
            auto E = exponentialSpace(A, B, cfg.caps);
            c["space"] = E.space.toJson();
            auto rep = checkAxioms(E.space, {Axiom::QuasiReflexive, Axiom::Transitive});
            c["axioms"] = toJson(rep);
            for (const auto& [ax, res] : rep)
              if (!res.holds) v &= Verdict::refuted({{"axiom", toString(ax)}, {"witness", res.witness}});
          } else if (construct == "coproduct") {
            auto W = weakCoproduct(A, B);
            c["space"] = W.space.toJson();
            auto laws = weakCoproductLaws(A, B, A, cfg.caps);
            c["laws"] = laws.toJson();
            v &= laws.overall();
          } else if (construct == "closure") {
            auto rep = closureTheoremSuite(A, B, cfg.caps);
            c["report"] = rep.toJson();
            v &= rep.overall();
          } else {
            throw UsageError("unknown construction " + construct);
          }
        }
        if (!golden.empty() && c.contains("space")) {
          std::ofstream out(golden);
          if (!out) throw UsageError("cannot write " + golden);
          out << c["space"].dump(2) << "\n";
        }
        result["construct"] = c;
      }
      if (!axioms.empty() || (construct.empty() && mine.empty() && !shadows)) {
        if (space.empty()) throw UsageError("workbench needs --space, --construct, --mine or --shadows");
        auto s = loadSpace(space);
        auto rep = checkAxioms(s, parseAxioms(axioms.empty() ? "all" : axioms));
        result["space"] = {{"carrier", s.labels()}, {"quantale", s.q().toJson()}, {"relation", relationJson(s)}};
        result["axioms"] = toJson(rep);
        for (const auto& [ax, res] : rep)
          if (!res.holds) v &= Verdict::refuted({{"axiom", toString(ax)}, {"witness", res.witness}});
      }
      return emit(name, cfg, v, result);
    }
    if (name == "prove") {
      if (!emit_refl.empty()) {
        auto l = loadTerm(emit_refl, context, cfg, prims);
        Derivation d = reflexivityDerivation(l.ctx, l.term, prims);
        std::string text = d.toJson().dump(2) + "\n";
        if (cfg.out.empty())
          std::cout << text;
        else
          std::ofstream(cfg.out) << text;
        return 0;
      }
      if (file.empty()) throw UsageError("prove needs a derivation file");
      Derivation d = Derivation::load(file);
      auto rep = checkDerivation(d, sem, QetOptions{cfg.sampler(), cfg.exactTol});
      Json r = rep.toJson();
      r["file"] = file;
      r["conclusion"] = d.conclusion.str();
      return emit(name, cfg, rep.verdict, r);
    }
    if (name == "demo-no-greatest") {
      RunConfig c = cfg;
      c.prims = "empty";
      auto r = noGreatestSuite(c);
      return emit(name, c, r.verdict, r.details);
    }
    if (name == "demo-bound-sweep") {
      auto r = boundSweep(cfg);
      return emit(name, cfg, r.verdict, r.details);
    }
    throw UsageError("unknown command " + name);
  } catch (const UsageError& e) {
    std::cerr << "qqm " << name << ": " << e.what() << "\n" << cmd->help();
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << "qqm " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const TypeError& e) {
    std::cerr << "qqm " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qqm " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qqm " << name << ": " << e.what() << "\n";
    return 2;
  }
}
