#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shortck/error.hpp"
#include "shortck/rng.hpp"
#include "shortck/xarith.hpp"

using namespace shortck;

namespace {

bool same(const ExtComplex& a, double re, double im, std::int64_t e2) {
  return a.m_re() == re && a.m_im() == im && a.e2() == e2;
}

ExtComplex mk(double m, std::int64_t e2) { return ExtComplex::normalize(m, 0.0, e2); }

}  // namespace

TEST_CASE("normalize examples") {
  CHECK(same(ext_normalize(8, 0, 0), 1, 0, 3));
  CHECK(same(ext_normalize(0, 0, 17), 0, 0, 0));
  CHECK(same(ext_normalize(0.75, 0, 0), 1.5, 0, -1));
  CHECK_THROWS_AS(ext_normalize(NAN, 0, 0), Error);
  CHECK_THROWS_AS(ext_normalize(INFINITY, 1, 0), Error);
}

TEST_CASE("normalized mantissa modulus lies in [1,2)") {
  SplitMix64 g(7);
  for (int i = 0; i < 10000; ++i) {
    const double re = (g.uniform() - 0.5) * std::ldexp(1.0, static_cast<int>(g.next() % 200) - 100);
    const double im = (g.uniform() - 0.5) * std::ldexp(1.0, static_cast<int>(g.next() % 200) - 100);
    const auto x = ext_normalize(re, im, 0);
    if (re == 0 && im == 0) continue;
    const double m = std::hypot(x.m_re(), x.m_im());
    REQUIRE(m >= 1.0);
    REQUIRE(m < 2.0);
  }
}

TEST_CASE("mul examples") {
  CHECK(same(mk(1.5, 10) * mk(1.5, 20), 1.125, 0, 31));
  CHECK((mk(1.5, 10) * ExtComplex{}).is_zero());
  CHECK(same(mk(1, 3) * mk(1, 4), 1, 0, 7));
}

TEST_CASE("add examples") {
  CHECK(same(mk(1, 100) + mk(1, 0), 1, 0, 100));
  CHECK(same(mk(1, 0) + mk(1, 0), 1, 0, 1));
  const auto x = ExtComplex::normalize(1.3, -0.4, 12345);
  CHECK((x + (-x)).is_zero());
  CHECK(same(mk(1, 0) + mk(1, 121), 1, 0, 121));
}

TEST_CASE("abs_log examples") {
  CHECK(ext_abs_log(mk(1, 50)).value() == doctest::Approx(50 * std::log(2.0)).epsilon(1e-15));
  CHECK(ext_abs_log(ExtComplex{}).is_neg_inf());
  CHECK(ext_abs_log(mk(1.5, 0)).value() == doctest::Approx(std::log(1.5)).epsilon(1e-15));
}

TEST_CASE("round trip of ln magnitude") {
  SplitMix64 g(11);
  for (int i = 0; i < 100000; ++i) {
    const double re = 2.0 * g.uniform() - 1.0, im = 2.0 * g.uniform() - 1.0;
    if (re == 0 && im == 0) continue;
    const auto e2 = static_cast<std::int64_t>(g.next() % 2000001) - 1000000;
    const double want = std::log(std::hypot(re, im)) + static_cast<double>(e2) * std::log(2.0);
    const double got = ext_abs_log(ext_normalize(re, im, e2)).value();
    REQUIRE(std::abs(got - want) <= 1e-14 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("mul is commutative bit-exactly and one is neutral") {
  SplitMix64 g(3);
  for (int i = 0; i < 10000; ++i) {
    const auto a = ext_normalize(g.uniform() - 0.5, g.uniform() - 0.5, static_cast<std::int64_t>(g.next() % 1000) - 500);
    const auto b = ext_normalize(g.uniform() - 0.5, g.uniform() - 0.5, static_cast<std::int64_t>(g.next() % 1000) - 500);
    REQUIRE(a * b == b * a);
    REQUIRE(a * ExtComplex::one() == a);
  }
}

TEST_CASE("add of a dominant operand stays within one unit of ln") {
  SplitMix64 g(5);
  for (int i = 0; i < 10000; ++i) {
    const auto a = ext_normalize(2 * g.uniform() - 1, 2 * g.uniform() - 1, static_cast<std::int64_t>(g.next() % 400));
    const auto b = ext_normalize(2 * g.uniform() - 1, 2 * g.uniform() - 1, static_cast<std::int64_t>(g.next() % 400));
    if (a.is_zero() || b.is_zero()) continue;
    const double la = ext_abs_log(a).value(), lb = ext_abs_log(b).value();
    if (!(la > lb + 1)) continue;
    const double ls = ext_abs_log(a + b).value();
    REQUIRE(ls >= la - 1);
    REQUIRE(ls <= la + 1);
  }
}

TEST_CASE("complex arithmetic agrees with std::complex at moderate scale") {
  SplitMix64 g(9);
  for (int i = 0; i < 2000; ++i) {
    const std::complex<double> x(4 * g.uniform() - 2, 4 * g.uniform() - 2), y(4 * g.uniform() - 2, 4 * g.uniform() - 2);
    const auto X = ExtComplex::from_complex(x), Y = ExtComplex::from_complex(y);
    CHECK(std::abs((X * Y).to_complex() - x * y) <= 1e-15 * (1 + std::abs(x * y)));
    CHECK(std::abs((X + Y).to_complex() - (x + y)) <= 1e-15 * (1 + std::abs(x) + std::abs(y)));
    CHECK(std::abs((X - Y).to_complex() - (x - y)) <= 1e-15 * (1 + std::abs(x) + std::abs(y)));
    CHECK(std::abs((X / Y).to_complex() - x / y) <= 1e-14 * (1 + std::abs(x / y)));
  }
}

TEST_CASE("exponent budget is enforced") {
  const auto big = mk(1, kExponentBudget - 1);
  CHECK_THROWS_AS(big * big, ExponentBudgetError);
  const auto tiny = mk(1, -kExponentBudget + 1);
  CHECK_THROWS_AS(tiny * tiny, ExponentBudgetError);
  CHECK_THROWS_AS(ExtComplex::from_log2(1e30), ExponentBudgetError);
}

TEST_CASE("from_log2 and from_ln") {
  const auto x = ExtComplex::from_log2(1000.5);
  CHECK(ext_abs_log(x).value() == doctest::Approx(1000.5 * std::log(2.0)).epsilon(1e-14));
  const auto y = ExtComplex::from_ln(-12345.25, 0.7);
  CHECK(ext_abs_log(y).value() == doctest::Approx(-12345.25).epsilon(1e-14));
  CHECK(std::atan2(y.m_im(), y.m_re()) == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("PointK max norm") {
  const PointK x = PointK::of({3, 4}, {0, -2});
  CHECK(x.norm1_ln().value() == doctest::Approx(std::log(5.0)));
  CHECK(PointK::of({0, 0}, {0, 0}).norm1_ln().is_neg_inf());
  CHECK_THROWS_AS(PointK(9), UsageError);
}
