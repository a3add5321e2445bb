#include <doctest.h>

#include "qqm/corpus.hpp"
#include "qqm/normalize.hpp"
#include "qqm/parser.hpp"
#include "qqm/typecheck.hpp"

using namespace qqm;

namespace {

const PrimitiveTable& prims() {
  static PrimitiveTable p = PrimitiveTable::defaults();
  return p;
}

SimpleType typeOf(const std::string& ctx, const std::string& src) {
  return typecheck(parseContext(ctx), parseTerm(src), prims());
}

}  // namespace

TEST_SUITE("frontend") {
  TEST_CASE("types parse right-associatively") {
    auto t = parseType("Real -> Real -> Real");
    REQUIRE(t.isArrow());
    CHECK(t.cod().isArrow());
    CHECK(parseType("(Real -> Real) -> Real").dom().isArrow());
    CHECK(parseType("Real * Real -> Real").dom().isProd());
    CHECK(parseType("Real => Real") == parseType("Real -> Real"));
    CHECK(parseType("(Real -> Real) -> Real").order() == 2);
  }

  TEST_CASE("terms round-trip through printing") {
    for (std::string src : {"\\x:Real. sin(x)", "f (f x)", "<x, add2(x, y)>", "fst(<1.0, 2.0>)",
                            "(\\a:Real. \\b:Real. a) x y", "add[0.5](x)"}) {
      Term t = parseTerm(src);
      CHECK(alphaEqual(parseTerm(t.str()), t));
    }
  }

  TEST_CASE("typing") {
    CHECK(typeOf("x: Real", "sin(x)") == SimpleType::real());
    CHECK(typeOf("", "\\x:Real. x") == parseType("Real -> Real"));
    CHECK(typeOf("f: Real -> Real, x: Real", "let y be add(x) in diff(f y, f x)") == SimpleType::real());
    CHECK(typeOf("", "<1.0, \\x:Real. x>") == parseType("Real * (Real -> Real)"));
    CHECK(typeOf("", "\\F:(Real -> Real) -> Real. F (\\x:Real. 1.0)") ==
          parseType("((Real -> Real) -> Real) -> Real"));
  }

  TEST_CASE("type errors carry locations") {
    CHECK_THROWS_AS(typeOf("", "sin(1.0, 2.0)"), TypeError);
    CHECK_THROWS_AS(typeOf("", "y"), TypeError);
    CHECK_THROWS_AS(typeOf("", "(1.0) 2.0"), TypeError);
    CHECK_THROWS_AS(typeOf("", "fst(1.0)"), TypeError);
    CHECK_THROWS_AS(typeOf("", "nosuchprim(1.0)"), TypeError);
    try {
      typeOf("", "\n  fst(1.0)");
      FAIL("expected a type error");
    } catch (const TypeError& e) {
      CHECK(e.span.line == 2);
    }
  }

  TEST_CASE("syntax errors") {
    CHECK_THROWS_AS(parseTerm("\\x:Real"), SyntaxError);
    CHECK_THROWS_AS(parseTerm("(x"), SyntaxError);
    CHECK_THROWS_AS(parseTerm("<x y>"), SyntaxError);
    CHECK_THROWS_AS(parseType("Real ->"), SyntaxError);
  }

  TEST_CASE("let elaborates to a beta redex") {
    TypingContext ctx = parseContext("x: Real");
    Term e = elaborate(ctx, parseTerm("let z be sin(x) in add2(z, z)"), prims());
    CHECK(e.kind() == Term::Kind::App);
    CHECK(e.fn().kind() == Term::Kind::Lam);
    CHECK(betaEtaEqual(e, parseTerm("add2(sin(x), sin(x))")));
  }

  TEST_CASE("alpha and beta-eta equality") {
    CHECK(alphaEqual(parseTerm("\\x:Real. x"), parseTerm("\\y:Real. y")));
    CHECK(!alphaEqual(parseTerm("\\x:Real. y"), parseTerm("\\y:Real. y")));
    CHECK(betaEtaEqual(parseTerm("(\\a:Real. \\b:Real. a) x y"), parseTerm("x")));
    CHECK(betaEtaEqual(parseTerm("\\x:Real. f x"), parseTerm("f")));
    CHECK(betaEtaEqual(parseTerm("fst(<x, y>)"), parseTerm("x")));
    CHECK(!betaEtaEqual(parseTerm("sin(x)"), parseTerm("cos(x)")));
  }

  TEST_CASE("capture-avoiding substitution") {
    Term t = parseTerm("\\y:Real. add2(x, y)");
    Term r = substitute(t, "x", parseTerm("y"));
    CHECK(freeVars(r) == std::set<std::string>{"y"});
    CHECK(r.binder() != "y");
  }

  TEST_CASE("corpora typecheck") {
    Corpus c = Corpus::builtin(prims());
    CHECK(c.entries().size() >= 20);
    CHECK(c.groundEntries().size() >= 20);
    for (const auto& e : c.entries()) CHECK(typecheck(e.ctx, e.term, prims()) == e.type);
    Corpus p = Corpus::pure(PrimitiveTable::none());
    for (const auto& e : p.entries()) CHECK(typecheck(e.ctx, e.term, PrimitiveTable::none()) == e.type);
    CHECK_THROWS(c.at("no-such-entry"));
  }

  TEST_CASE("contexts") {
    auto ctx = parseContext("f: Real -> Real, x: Real");
    REQUIRE(ctx.size() == 2);
    CHECK(ctx[0].type.isArrow());
    CHECK(ctx.lookup("x") == std::optional<std::size_t>(1));
    CHECK(parseContext("").empty());
  }
}
