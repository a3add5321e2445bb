#include <doctest.h>

#include <cmath>

#include "qqm/quantale.hpp"

using namespace qqm;

namespace {

// Brute-force checks of the quantale laws on a finite table.
void checkLaws(const FiniteQuantale& q) {
  const std::size_t n = q.size();
  for (std::size_t a = 0; a < n; ++a) {
    CHECK(q.tensor(a, q.unit()) == a);
    CHECK(q.leq(a, q.top()));
    CHECK(q.leq(q.bottom(), a));
    for (std::size_t b = 0; b < n; ++b) {
      CHECK(q.tensor(a, b) == q.tensor(b, a));
      CHECK(q.leq(q.tensor(a, b), a));
      // residual: c (x) a <= b iff c <= a -o b
      for (std::size_t c = 0; c < n; ++c) {
        CHECK(q.leq(q.tensor(c, a), b) == q.leq(c, q.residual(a, b)));
        CHECK(q.tensor(a, q.tensor(b, c)) == q.tensor(q.tensor(a, b), c));
        CHECK(q.tensor(a, q.join(b, c)) == q.join(q.tensor(a, b), q.tensor(a, c)));
      }
    }
  }
}

}  // namespace

TEST_SUITE("quantale") {
  TEST_CASE("presets satisfy the laws") {
    checkLaws(*FiniteQuantale::boolean());
    checkLaws(*FiniteQuantale::godelChain(4));
    checkLaws(*FiniteQuantale::lukasiewiczChain(4));
    checkLaws(*FiniteQuantale::truncatedLawvere(4));
    checkLaws(*FiniteQuantale::diamond());
    checkLaws(*FiniteQuantale::lifted(*FiniteQuantale::godelChain(3)));
    checkLaws(*FiniteQuantale::product(*FiniteQuantale::boolean(), *FiniteQuantale::lukasiewiczChain(3)));
  }

  TEST_CASE("truncated lawvere reads numerically") {
    auto q = FiniteQuantale::truncatedLawvere(3);
    const auto& nums = q->numericValues();
    REQUIRE(nums.size() == q->size());
    for (std::size_t a = 0; a < q->size(); ++a)
      for (std::size_t b = 0; b < q->size(); ++b) {
        double sum = nums[a] + nums[b];
        CHECK(nums[q->tensor(a, b)] == (sum > 3 ? kInf : sum));
        CHECK(q->leq(a, b) == (nums[a] >= nums[b]));
      }
  }

  TEST_CASE("invalid tables are rejected with every violation") {
    std::vector<std::string> names{"0", "1"};
    std::vector<std::vector<bool>> order{{true, true}, {false, true}};
    std::vector<std::vector<std::size_t>> bad{{0, 1}, {1, 0}};
    auto v = FiniteQuantale::violations(names, order, bad, 1);
    CHECK(!v.empty());
    CHECK_THROWS_AS(FiniteQuantale(names, order, bad, 1), std::invalid_argument);
  }

  TEST_CASE("lawvere scalars") {
    auto L = QuantaleDescriptor::lawvere();
    auto s = [](double x) { return QuantaleValue::scalar(x); };
    CHECK(tensor(L, s(1.5), s(2.0)).asScalar() == 3.5);
    CHECK(std::isinf(tensor(L, s(1.0), s(kInf)).asScalar()));
    CHECK(unit(L).asScalar() == 0.0);
    CHECK(std::isinf(bottom(L).asScalar()));
    // reversed order: 3 below 1
    CHECK(leq(L, s(3.0), s(1.0)).ok());
    CHECK(leq(L, s(1.0), s(3.0)).isRefuted());
    CHECK(join(L, {s(3.0), s(1.0), s(2.0)}).asScalar() == 1.0);
    CHECK(meet(L, {s(3.0), s(1.0), s(2.0)}).asScalar() == 3.0);
    // truncated subtraction
    CHECK(residual(L, s(1.0), s(3.0)).asScalar() == 2.0);
    CHECK(residual(L, s(3.0), s(1.0)).asScalar() == 0.0);
    CHECK(residual(L, s(kInf), s(kInf)).asScalar() == 0.0);
  }

  TEST_CASE("product and lifted shapes") {
    auto L = QuantaleDescriptor::lawvere();
    auto P = QuantaleDescriptor::product(L, L);
    auto a = QuantaleValue::pair(QuantaleValue::scalar(1), QuantaleValue::scalar(2));
    auto b = QuantaleValue::pair(QuantaleValue::scalar(3), QuantaleValue::scalar(0.5));
    auto t = tensor(P, a, b);
    CHECK(t.first().asScalar() == 4.0);
    CHECK(t.second().asScalar() == 2.5);
    CHECK(leq(P, a, b).isRefuted());
    CHECK_THROWS_AS(checkShape(P, QuantaleValue::scalar(1)), QuantaleShapeError);

    auto Lf = QuantaleDescriptor::lifted(L);
    CHECK(bottom(Lf).isEmptyLift());
    CHECK(leq(Lf, QuantaleValue::emptyLift(), QuantaleValue::lift(QuantaleValue::scalar(kInf))).ok());
  }

  TEST_CASE("function space pointwise") {
    auto L = QuantaleDescriptor::lawvere();
    CarrierDescriptor c{SimpleType::real(), {}};
    auto F = QuantaleDescriptor::funSpace(c, L, L);
    auto e1 = QuantaleValue::errFun([](const SemValue& x, const QuantaleValue& a) {
      return QuantaleValue::scalar(std::fabs(x.asReal()) + a.asScalar());
    }, "e1");
    auto e2 = QuantaleValue::errFun([](const SemValue& x, const QuantaleValue& a) {
      return QuantaleValue::scalar(std::fabs(x.asReal()) + 2 * a.asScalar() + 1);
    }, "e2");
    CHECK(leq(F, e2, e1).ok());
    CHECK(leq(F, e1, e2).isRefuted());
    auto sum = tensor(F, e1, e2);
    CHECK(sum(1.0, 0.5) == doctest::Approx(1.5 + 3.0));
    CHECK(join(F, {e1, e2})(1.0, 0.5) == doctest::Approx(1.5));
  }

  TEST_CASE("finite table descriptors enumerate every element") {
    auto q = FiniteQuantale::diamond();
    auto D = QuantaleDescriptor::finiteTable(q);
    CHECK(sampleElements(D, SamplerConfig{}).size() == q->size());
    auto above = chainAbove(D, QuantaleValue::finite(q->bottom()), 10);
    CHECK(above.front().finiteIndex() == q->bottom());
  }
}
