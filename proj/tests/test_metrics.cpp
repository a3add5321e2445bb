#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "qqm/functions.hpp"
#include "qqm/metrics.hpp"
#include "qqm/parser.hpp"

using namespace qqm;

namespace {

constexpr double kPi = std::numbers::pi;
const SimpleType kRR = SimpleType::arrow(SimpleType::real(), SimpleType::real());

// Independent grid oracle for rho-hat at Real => Real:
// sup over |y - x| <= a of max(|f x - g y|, |f x - f y|).
double oracleArrow(const std::function<double(double)>& f, const std::function<double(double)>& g, double x,
                   double a, int n = 200001) {
  double best = 0;
  for (int i = 0; i < n; ++i) {
    double y = x - a + 2 * a * i / (n - 1);
    best = std::max({best, std::fabs(f(x) - g(y)), std::fabs(f(x) - f(y))});
  }
  return best;
}

double arrow(const std::string& f, const std::string& g, double x, double a) {
  return rhoHatArrow(kRR, libraryFunction(f), libraryFunction(g), SemValue::real(x), QuantaleValue::scalar(a),
                     SamplerConfig{})
      .value.asScalar();
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("asymmetry at pi with radius 2pi") {
    double sinId = arrow("sin", "id", kPi, 2 * kPi);
    double idSin = arrow("id", "sin", kPi, 2 * kPi);
    CHECK(sinId == doctest::Approx(3 * kPi).epsilon(1e-9));
    CHECK(idSin == doctest::Approx(2 * kPi).epsilon(1e-9));
    auto sin = [](double y) { return std::sin(y); };
    auto id = [](double y) { return y; };
    CHECK(sinId == doctest::Approx(oracleArrow(sin, id, kPi, 2 * kPi)).epsilon(1e-6));
    CHECK(idSin == doctest::Approx(oracleArrow(id, sin, kPi, 2 * kPi)).epsilon(1e-6));
  }

  TEST_CASE("the f, g, h values at (0, 2)") {
    auto one = [](double) { return 1.0; };
    auto ab = [](double y) { return std::fabs(y); };
    auto id = [](double y) { return y; };
    CHECK(arrow("const:1", "abs", 0, 2) == 1.0);
    CHECK(arrow("abs", "id", 0, 2) == 2.0);
    CHECK(arrow("const:1", "id", 0, 2) == 3.0);
    CHECK(arrow("abs", "abs", 0, 2) == 2.0);
    CHECK(oracleArrow(one, ab, 0, 2) == doctest::Approx(1.0));
    CHECK(oracleArrow(ab, id, 0, 2) == doctest::Approx(2.0));
    CHECK(oracleArrow(one, id, 0, 2) == doctest::Approx(3.0));
    CHECK(oracleArrow(ab, ab, 0, 2) == doctest::Approx(2.0));
  }

  TEST_CASE("exact distance agrees with the grid oracle on the library") {
    const auto& names = libraryFunctionNames();
    for (const auto& f : names)
      for (const auto& g : names) {
        auto F = libraryFunction(f), G = libraryFunction(g);
        for (double x : {-1.0, 0.0, 0.7})
          for (double a : {0.0, 0.3, 1.5}) {
            double want = oracleArrow([&](double y) { return F(y); }, [&](double y) { return G(y); }, x, a, 4001);
            double got = exactArrowDistance(F, G)(x, a);
            CHECK_MESSAGE(got >= want - 1e-9, f, " ", g, " at ", x, ", ", a);
            CHECK_MESSAGE(got <= want + 1e-3 * std::max(1.0, want), f, " ", g, " at ", x, ", ", a);
          }
      }
  }

  TEST_CASE("membership at Real") {
    SamplerConfig cfg;
    auto R = [](double x) { return SemValue::real(x); };
    auto Q = [](double x) { return QuantaleValue::scalar(x); };
    CHECK(member(SimpleType::real(), R(1), Q(0.5), R(1.5), cfg).isProved());
    CHECK(member(SimpleType::real(), R(1), Q(0.4), R(1.5), cfg).isRefuted());
    CHECK(member(SimpleType::real(), R(1), Q(kInf), R(1e9), cfg).isProved());
  }

  TEST_CASE("membership at Real => Real") {
    SamplerConfig cfg;
    auto sin = libraryFunction("sin"), id = libraryFunction("id");
    CHECK(member(kRR, sin, exactArrowDistance(sin, id), id, cfg).ok());
    auto tooSmall = QuantaleValue::errFun([](const SemValue&, const QuantaleValue& a) { return a; }, "a");
    CHECK(member(kRR, sin, tooSmall, id, cfg).isRefuted());
  }

  TEST_CASE("self-distance") {
    SamplerConfig cfg;
    auto sigma = selfDistance(kRR, libraryFunction("const:1"), cfg);
    CHECK(sigma(0.3, 2.0) == 0.0);
    auto s = selfDistance(kRR, libraryFunction("sin"), cfg);
    CHECK(s(0.0, 0.5) == doctest::Approx(std::sin(0.5)));
    CHECK(checkSelfDistanceLemma(kRR, libraryFunction("sin"), cfg, 1e-3).ok());
    CHECK(checkSelfDistanceLemma(kRR, libraryFunction("square"), cfg, 1e-3).ok());
  }

  TEST_CASE("two-term bound") {
    PrimitiveTable prims = PrimitiveTable::defaults();
    Semantics sem(prims);
    auto b = twoTermBound(sem, parseTerm("\\x:Real. sin(x)"), parseTerm("\\x:Real. x"), SimpleType::real(),
                          SemValue::real(0.5), QuantaleValue::scalar(0.1), SamplerConfig{});
    CHECK(b.gap == doctest::Approx(std::fabs(std::sin(0.5) - 0.5)));
    CHECK(b.sBullet == doctest::Approx(0.1));
    CHECK(b.tBullet == doctest::Approx(std::sin(0.5) - std::sin(0.4)).epsilon(1e-6));
    CHECK(b.bound == doctest::Approx(std::max(b.gap + b.sBullet, b.tBullet)));
    CHECK(b.membership.ok());
    CHECK_THROWS_AS(twoTermBound(sem, parseTerm("1.0"), parseTerm("\\x:Real. x"), SimpleType::real(),
                                 SemValue::real(0), QuantaleValue::scalar(0.1), SamplerConfig{}),
                    std::invalid_argument);
  }

  TEST_CASE("finite-difference bound against direct evaluation") {
    for (double eps : {0.1, 0.01, 0.001}) {
      double a = eps * eps;
      auto r = exampleBoundReplay(eps, a);
      double actual = std::fabs(1.0 - (std::sin(a + eps) - std::sin(a)) / eps);
      CHECK(r.actual == doctest::Approx(actual).epsilon(1e-9));
      CHECK(r.bound >= actual);
      CHECK(r.holds);
    }
    CHECK(exampleBoundReplay(0.001, 1e-6).bound < 0.01);
    CHECK_THROWS_AS(exampleBoundReplay(0.0, 0.1), std::invalid_argument);
  }

  TEST_CASE("no greatest relation replay") {
    auto r = replayNoGreatestCounterexample(PrimitiveTable::none(), SamplerConfig{});
    CHECK(r.JO == 0.0);
    CHECK(r.JZ == 1.0);
    CHECK(r.sigmaJOD == 0.0);
    CHECK(r.violated.isRefuted());
  }
}
