#include <doctest.h>

#include <cmath>

#include "qqm/corpus.hpp"
#include "qqm/normalize.hpp"
#include "qqm/parser.hpp"
#include "qqm/qet.hpp"
#include "qqm/typecheck.hpp"

using namespace qqm;

namespace {

std::string derivationPath(const std::string& name) { return std::string(QQM_DATA_DIR) + "/derivations/" + name; }

struct Fixture {
  PrimitiveTable prims = PrimitiveTable::defaults();
  Semantics sem{prims};

  Derivation lit(double x, double y) const {
    Judgment j{{}, Term::constant(x), DistExpr::constant(std::fabs(x - y)), Term::constant(y), SimpleType::real()};
    return Derivation{Rule::Lit, {}, j, nullptr};
  }
  Derivation refl(const std::string& ctx, const std::string& src) const {
    auto c = parseContext(ctx);
    return reflexivityDerivation(c, elaborate(c, parseTerm(src), prims), prims);
  }
};

double sinModulus(double x, double a, int n = 20001) {
  double best = 0;
  for (int i = 0; i < n; ++i) {
    double y = x - a + 2 * a * i / (n - 1);
    best = std::max(best, std::fabs(std::sin(y) - std::sin(x)));
  }
  return best;
}

}  // namespace

TEST_SUITE("qet") {
  TEST_CASE_FIXTURE(Fixture, "derivation files") {
    CHECK(checkDerivation(Derivation::load(derivationPath("lit.json")), sem).verdict.isProved());
    CHECK(checkDerivation(Derivation::load(derivationPath("weaken.json")), sem).verdict.isProved());
    CHECK(checkDerivation(Derivation::load(derivationPath("trans.json")), sem).verdict.isProved());
    CHECK(checkDerivation(Derivation::load(derivationPath("sin-refl.json")), sem).verdict.isProved());
    CHECK(checkDerivation(Derivation::load(derivationPath("sem-replace.json")), sem).verdict.ok());
    auto broken = checkDerivation(Derivation::load(derivationPath("broken-weaken.json")), sem);
    CHECK(broken.verdict.isRefuted());
    REQUIRE(broken.firstFailure() != nullptr);
    CHECK(broken.firstFailure()->path == "root");
  }

  TEST_CASE_FIXTURE(Fixture, "schema violations") {
    // trans premises that do not share the middle term
    Judgment j{{}, Term::constant(1), DistExpr::constant(2), Term::constant(3), SimpleType::real()};
    Derivation bad{Rule::Trans, {lit(1, 2), lit(2.5, 3)}, j, nullptr};
    CHECK(checkDerivation(bad, sem).verdict.isRefuted());
    // lit with the wrong distance
    Derivation wrong = lit(1, 2);
    wrong.conclusion.dist = DistExpr::constant(0.5);
    CHECK(checkDerivation(wrong, sem).verdict.isRefuted());
    // wrong arity
    Derivation extra = lit(1, 2);
    extra.premises.push_back(lit(1, 2));
    CHECK(checkDerivation(extra, sem).verdict.isRefuted());
  }

  TEST_CASE_FIXTURE(Fixture, "reflexivity for every corpus entry") {
    Corpus c = Corpus::builtin(prims);
    QetOptions opts;
    opts.sampler.pointsPerDomain = 4;
    for (const auto& e : c.entries()) {
      auto d = reflexivityDerivation(e.ctx, e.term, prims);
      auto rep = checkDerivation(d, sem, opts);
      CHECK_MESSAGE(rep.verdict.ok(), e.name);
      CHECK_MESSAGE(distanceEqual(d.conclusion.dist, DistExpr::deriv(e.term), e.ctx, e.type, sem, opts).ok(), e.name);
    }
  }

  TEST_CASE_FIXTURE(Fixture, "substitution of a literal into sin") {
    auto d1 = refl("x: Real", "sin(x)");
    auto d2 = lit(0.5, 0.75);
    auto s = substitutionDerivation(d1, d2, "x");
    CHECK(s.sameSides.conclusion.ctx.empty());
    CHECK(alphaEqual(s.sameSides.conclusion.left, parseTerm("sin(0.5)")));
    CHECK(alphaEqual(s.sameSides.conclusion.right, parseTerm("sin(0.75)")));
    CHECK(alphaEqual(s.leftOnly.conclusion.right, parseTerm("sin(0.75)")));
    CHECK(checkDerivation(s.sameSides, sem).verdict.ok());
    CHECK(checkDerivation(s.leftOnly, sem).verdict.ok());
    double c = evalDist(s.c, {}, {}, {}, sem).asScalar();
    CHECK(c == doctest::Approx(sinModulus(0.5, 0.25)).epsilon(1e-6));
    CHECK(distanceEqual(s.sameSides.conclusion.dist, s.c, {}, SimpleType::real(), sem).ok());
    CHECK(groundSoundness(s.sameSides.conclusion, sem, 1e-9).ok());
  }

  TEST_CASE_FIXTURE(Fixture, "substitution in a two-variable context") {
    auto d1 = refl("x: Real, y: Real", "add2(mul(x, y), y)");
    auto s = substitutionDerivation(d1, lit(0.25, 0.5), "x");
    REQUIRE(s.sameSides.conclusion.ctx.size() == 1);
    QetOptions opts;
    opts.sampler.pointsPerDomain = 6;
    CHECK(checkDerivation(s.sameSides, sem, opts).verdict.ok());
    CHECK(checkDerivation(s.leftOnly, sem, opts).verdict.ok());
  }

  TEST_CASE_FIXTURE(Fixture, "misaligned contexts") {
    auto d1 = refl("x: Real", "sin(x)");
    CHECK_THROWS_AS(substitutionDerivation(d1, lit(0, 1), "z"), std::invalid_argument);
    CHECK_THROWS_AS(substitutionDerivation(d1, d1, "x"), std::invalid_argument);
    auto fun = refl("", "\\u:Real. u");
    CHECK_THROWS_AS(substitutionDerivation(d1, fun, "x"), std::invalid_argument);
  }

  TEST_CASE_FIXTURE(Fixture, "random closed derivations are sound") {
    Rng rng(29);
    for (int i = 0; i < 60; ++i) {
      auto d = randomClosedDerivation(rng, prims, 3);
      auto rep = checkDerivation(d, sem);
      REQUIRE_MESSAGE(rep.verdict.ok(), d.conclusion.str());
      CHECK(groundSoundness(d.conclusion, sem, 1e-9).ok());
      auto step = randomClosureStep(rng, d, prims);
      CHECK(checkDerivation(step, sem).verdict.ok());
      CHECK(groundSoundness(step.conclusion, sem, 1e-9).ok());
    }
  }

  TEST_CASE_FIXTURE(Fixture, "unsound judgments are refuted") {
    Judgment j{{}, parseTerm("sin(0.0)"), DistExpr::constant(0.1), parseTerm("1.0"), SimpleType::real()};
    CHECK(groundSoundness(j, sem, 1e-9).isRefuted());
  }

  TEST_CASE_FIXTURE(Fixture, "json round trips") {
    auto d = refl("f: Real -> Real, x: Real", "f (sin(x))");
    auto back = Derivation::fromJson(d.toJson());
    CHECK(back.toJson() == d.toJson());
    CHECK(back.size() == d.size());
    auto e = DistExpr::subst(DistExpr::var("x"), 0, "x", SimpleType::real(), parseTerm("0.5"), DistExpr::constant(0.25));
    CHECK(DistExpr::fromJson(e.toJson()) == e);
    CHECK(DistExpr::fromJson(Json("inf")).value() == kInf);
    auto sub = substitutionDerivation(refl("x: Real", "sin(x)"), lit(0.5, 0.75), "x").sameSides;
    auto loaded = Derivation::fromJson(sub.toJson());
    CHECK(loaded.toJson() == sub.toJson());
    CHECK(checkDerivation(loaded, sem).verdict.ok());
    for (auto r : {Rule::Lit, Rule::Var, Rule::Prim, Rule::Lam, Rule::App, Rule::Pair, Rule::Fst, Rule::Snd,
                   Rule::SemReplace, Rule::Weaken, Rule::Join, Rule::Trans, Rule::QRefl})
      CHECK((ruleFromString(toString(r)) == r));
    CHECK_THROWS(ruleFromString("cut"));
  }
}
