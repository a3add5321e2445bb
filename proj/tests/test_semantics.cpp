#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qqm/corpus.hpp"
#include "qqm/functions.hpp"
#include "qqm/parser.hpp"
#include "qqm/semantics.hpp"
#include "qqm/typecheck.hpp"

using namespace qqm;

namespace {

struct Fixture {
  PrimitiveTable prims = PrimitiveTable::defaults(0.1);
  Semantics sem{prims};

  double eval(const std::string& ctx, const std::string& src, const Environment& gamma) const {
    auto c = parseContext(ctx);
    return sem.eval(c, elaborate(c, parseTerm(src), prims), gamma).asReal();
  }
  QuantaleValue derive(const std::string& ctx, const std::string& src, const Environment& gamma,
                       const ErrEnvironment& xi) const {
    auto c = parseContext(ctx);
    return sem.derive(c, elaborate(c, parseTerm(src), prims), gamma, xi);
  }
};

SemValue R(double x) { return SemValue::real(x); }
QuantaleValue Q(double x) { return QuantaleValue::scalar(x); }

// Sup of |g(y) - g(x)| over |y - x| <= a by dense sampling.
template <class G>
double bruteModulus(G g, double x, double a, int n = 20001) {
  double best = 0;
  for (int i = 0; i < n; ++i) {
    double y = x - a + 2 * a * i / (n - 1);
    best = std::max(best, std::fabs(g(y) - g(x)));
  }
  return best;
}

}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE_FIXTURE(Fixture, "evaluation") {
    CHECK(eval("x: Real", "sin(x)", {R(0.5)}) == doctest::Approx(std::sin(0.5)));
    CHECK(eval("x: Real, y: Real", "add2(mul(x,x), neg(y))", {R(3), R(2)}) == 7.0);
    CHECK(eval("f: Real -> Real, x: Real", "f (f x)", {libraryFunction("sin"), R(1)}) ==
          doctest::Approx(std::sin(std::sin(1.0))));
    CHECK(eval("x: Real", "let z be sin(x) in add2(z, z)", {R(1)}) == doctest::Approx(2 * std::sin(1.0)));
    CHECK(eval("", "snd(<1.0, 2.0>)", {}) == 2.0);
    CHECK(eval("x: Real", "add(x)", {R(1)}) == doctest::Approx(1.1));
    CHECK(eval("x: Real", "diff(sin(x), cos(x))", {R(0)}) == doctest::Approx((0.0 - 1.0) / 0.1));
  }

  TEST_CASE_FIXTURE(Fixture, "primitive derivatives match brute-force moduli") {
    for (double x : {-2.0, -0.3, 0.0, 1.1, 3.0})
      for (double a : {0.0, 0.05, 0.5, 2.0}) {
        CHECK(derive("x: Real", "sin(x)", {R(x)}, {Q(a)}).asScalar() >=
              bruteModulus([](double y) { return std::sin(y); }, x, a) - 1e-9);
        CHECK(derive("x: Real", "sin(x)", {R(x)}, {Q(a)}).asScalar() <= std::min(a, 2.0) + 1e-9);
        CHECK(derive("x: Real", "mul(x, x)", {R(x)}, {Q(a)}).asScalar() ==
              doctest::Approx(bruteModulus([](double y) { return y * y; }, x, a)).epsilon(1e-6));
        CHECK(derive("x: Real", "neg(x)", {R(x)}, {Q(a)}).asScalar() == doctest::Approx(a));
        CHECK(derive("x: Real", "abs(x)", {R(x)}, {Q(a)}).asScalar() ==
              doctest::Approx(bruteModulus([](double y) { return std::fabs(y); }, x, a)).epsilon(1e-6));
      }
  }

  TEST_CASE_FIXTURE(Fixture, "variables and constants") {
    CHECK(derive("x: Real", "x", {R(1)}, {Q(0.25)}).asScalar() == 0.25);
    CHECK(derive("x: Real", "2.5", {R(1)}, {Q(0.25)}).asScalar() == 0.0);
    CHECK(derive("x: Real, y: Real", "add2(x, y)", {R(1), R(2)}, {Q(0.25), Q(0.5)}).asScalar() == 0.75);
  }

  TEST_CASE_FIXTURE(Fixture, "higher-order derivative") {
    // [[f x]]-bullet at (f = sin, d = rho-hat(sin, sin)) is sigma_sin(x, a)
    auto sin = libraryFunction("sin");
    auto d = exactArrowDistance(sin, sin);
    double v = derive("f: Real -> Real, x: Real", "f x", {sin, R(0)}, {d, Q(0.5)}).asScalar();
    CHECK(v == doctest::Approx(bruteModulus([](double y) { return std::sin(y); }, 0.0, 0.5)).epsilon(1e-6));
    // abstraction bodies are evaluated lazily at the given (v, a')
    auto lam = derive("", "\\y:Real. mul(y, y)", {}, {});
    REQUIRE(lam.isErrFun());
    CHECK(lam(1.0, 0.5) == doctest::Approx(1.25));
  }

  TEST_CASE_FIXTURE(Fixture, "missing moduli") {
    PrimitiveTable t;
    Primitive p = PrimitiveTable::builtinPrimitive("sin", 0.1);
    p.name = "opaque";
    p.modulus = nullptr;
    t.add(p);
    Semantics s(t);
    auto c = parseContext("x: Real");
    Term term = elaborate(c, parseTerm("opaque(x)"), t);
    CHECK_THROWS_AS(s.derive(c, term, {R(0)}, {Q(0.1)}), MissingModulus);
    Semantics grid(t, ModulusOptions{ModulusMode::GridOracle, 257, 1e3, true});
    CHECK(grid.derive(c, term, {R(0)}, {Q(0.1)}).asScalar() == doctest::Approx(std::sin(0.1)).epsilon(1e-3));
  }

  TEST_CASE("quantale of a type") {
    CHECK(quantaleOfType(SimpleType::real()).shape() == QuantaleDescriptor::Shape::Lawvere);
    CHECK(quantaleOfType(parseType("Real -> Real")).shape() == QuantaleDescriptor::Shape::FunSpace);
    CHECK(quantaleOfType(parseType("Real * Real")).shape() == QuantaleDescriptor::Shape::Product);
  }
}
