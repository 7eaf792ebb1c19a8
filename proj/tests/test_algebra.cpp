#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/eta.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/series.hpp"

using namespace rectcft;

namespace {

Rational R(long p, long q = 1) { return make_rational(p, q); }

Series<Rational> poly(std::vector<Rational> c, Variable v = Variable::q) {
  return Series<Rational>::from_coefficients(v, std::move(c));
}

// Counts partitions of n by enumeration, no recurrence.
long brute_partitions(int n) {
  std::function<long(int, int)> rec = [&](int rest, int max_part) -> long {
    if (rest == 0) return 1;
    long total = 0;
    for (int k = std::min(rest, max_part); k >= 1; --k) total += rec(rest - k, k);
    return total;
  };
  return rec(n, n);
}

Series<Rational> random_series(std::mt19937& rng, int order, bool unit_constant) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  Series<Rational> s(Variable::q, order);
  for (int k = 0; k <= order; ++k) s.set(k, make_rational(num(rng), den(rng)));
  if (unit_constant) s.set(0, Rational(1));
  return s;
}

}  // namespace

TEST(Rational, CanonicalAfterConstruction) {
  const Rational r = make_rational(6, -4);
  EXPECT_EQ(r.get_num(), -3);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(to_string(r), "-3/2");
  EXPECT_EQ(to_string(Rational(3)), "3/1");
  EXPECT_THROW(make_rational(1, 0), std::domain_error);
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("1/2"), R(1, 2));
  EXPECT_EQ(parse_rational("-6/4"), R(-3, 2));
  EXPECT_EQ(parse_rational("7"), R(7));
  EXPECT_EQ(parse_rational("0.25"), R(1, 4));
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(CPoly, TrimsAndMultiplies) {
  const CPoly c = CPoly::c();
  const CPoly p = (c + CPoly(6)) * c * R(1, 8);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.coefficient(1), R(3, 4));
  EXPECT_EQ(p.to_string(), "1/8*c^2 + 3/4*c");
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((p - p).degree(), -1);
  EXPECT_EQ(p.evaluate(R(2)), R(2));
}

TEST(CPoly, ExactDivisionAndItsAlarm) {
  const CPoly c = CPoly::c();
  const CPoly p = c * (c + CPoly(8));
  EXPECT_EQ(exact_divide(p, c), c + CPoly(8));
  EXPECT_EQ(p.divided_by_c(), c + CPoly(8));
  EXPECT_THROW(exact_divide(p + CPoly(1), c), StructuralError);
  EXPECT_THROW((c + CPoly(1)).divided_by_c(), StructuralError);
}

TEST(Series, MultiplicationExamples) {
  const auto a = poly({R(1), R(1), R(0)});
  const auto b = poly({R(1), R(-1), R(0)});
  EXPECT_EQ(a * b, poly({R(1), R(0), R(-1)}));

  Series<Rational> geo(Variable::q, 5);
  for (int k = 0; k <= 5; ++k) geo.set(k, R(1));
  const auto one_minus = poly({R(1), R(-1), R(0), R(0), R(0), R(0)});
  EXPECT_EQ(geo * one_minus, Series<Rational>::one(Variable::q, 5));
}

TEST(Series, ProductOfInverseFactorsCountsPartitions) {
  Series<Rational> prod = Series<Rational>::one(Variable::q, 8);
  for (int n = 1; n <= 8; ++n) {
    Series<Rational> inv(Variable::q, 8);
    for (int k = 0; k * n <= 8; ++k) inv.set(k * n, R(1));
    prod = prod * inv;
  }
  const long expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22};
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(prod[k], R(expected[k])) << k;
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(prod[k], R(brute_partitions(k)));
}

TEST(Series, OrderNeverExtends) {
  Series<Rational> a = Series<Rational>::one(Variable::q, 3);
  Series<Rational> b = Series<Rational>::one(Variable::q, 5);
  EXPECT_EQ((a * b).order(), 3);
  EXPECT_EQ((a + b).order(), 3);
  EXPECT_THROW(a.truncated(4), std::invalid_argument);
  EXPECT_THROW(a * Series<Rational>::one(Variable::qhat, 3), std::invalid_argument);
}

TEST(Series, ExpExamples) {
  EXPECT_EQ(exp(Series<Rational>(Variable::q, 4)), Series<Rational>::one(Variable::q, 4));
  const auto e = exp(poly({R(0), R(1), R(0), R(0), R(0)}));
  EXPECT_EQ(e, poly({R(1), R(1), R(1, 2), R(1, 6), R(1, 24)}));
  EXPECT_THROW(exp(poly({R(1), R(1)})), std::domain_error);
  EXPECT_THROW(log(poly({R(2), R(1)})), std::domain_error);
}

TEST(Series, LogOfP1MatchesTaylorOfLogOneMinus4q) {
  const auto p1 = pow(poly({R(1), R(-4), R(0), R(0)}), R(-1, 4));
  const auto l = log(p1);
  // -1/4 log(1 - 4q) = 1/4 sum (4q)^k / k
  EXPECT_EQ(l, poly({R(0), R(1), R(2), R(16, 3)}));
  EXPECT_EQ(l * R(4), poly({R(0), R(4), R(8), R(64, 3)}));
}

TEST(Series, ScalarPowers) {
  const auto a = poly({R(1), R(-4), R(0)});
  EXPECT_EQ(pow(a, R(-1, 4)), poly({R(1), R(1), R(5, 2)}));
  EXPECT_EQ(pow(a, R(0)), Series<Rational>::one(Variable::q, 2));
  const auto sq = pow(poly({R(1), R(1), R(0), R(0)}), R(2));
  EXPECT_EQ(sq, poly({R(1), R(2), R(1), R(0)}));
}

TEST(Series, TwoOverCPower) {
  const int order = 6;
  // (1-q)^{-c} from the log series -c log(1-q) = c sum q^k/k
  Series<CPoly> l(Variable::q, order);
  for (int k = 1; k <= order; ++k) l.set(k, CPoly::c() * R(1, k));
  const auto a = exp(l);
  const auto reduced = require_constant(pow_two_over_c(a));
  Series<Rational> expected(Variable::q, order);
  for (int k = 0; k <= order; ++k) expected.set(k, R(k + 1));  // (1-q)^{-2}
  EXPECT_EQ(reduced, expected);

  Series<CPoly> bad = Series<CPoly>::one(Variable::q, 2);
  bad.set(1, CPoly(1));
  EXPECT_THROW(pow_two_over_c(bad), StructuralError);
}

TEST(Series, RequireConstantAlarm) {
  Series<CPoly> s = Series<CPoly>::one(Variable::q, 1);
  s.set(1, CPoly::c());
  EXPECT_THROW(require_constant(s), StructuralError);
}

TEST(Series, SquareSubstitutionRoundTrip) {
  const auto a = poly({R(1), R(2), R(3)});
  const auto s = substitute_square(a);
  EXPECT_EQ(s.variable(), Variable::qhat);
  EXPECT_EQ(s.order(), 5);
  EXPECT_EQ(s[4], R(3));
  EXPECT_EQ(even_part_in_q(s), a);
  auto odd = s;
  odd.set(3, R(1));
  EXPECT_THROW(even_part_in_q(odd), StructuralError);
}

TEST(SeriesProperty, RingAxiomsOnRandomSeries) {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_series(rng, 6, false);
    const auto b = random_series(rng, 6, false);
    const auto c = random_series(rng, 6, false);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) - b, a);
  }
}

TEST(SeriesProperty, ExpLogRoundTrip) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_series(rng, 7, true);
    EXPECT_EQ(exp(log(a)), a);
    auto z = random_series(rng, 7, false);
    z.set(0, Rational(0));
    EXPECT_EQ(log(exp(z)), z);
  }
}

TEST(Partitions, RecurrenceMatchesEnumeration) {
  const auto p = partition_numbers(26);
  const long first[] = {1, 1, 2, 3, 5, 7, 11, 15};
  for (int k = 0; k < 8; ++k) EXPECT_EQ(p[static_cast<std::size_t>(k)], first[k]);
  for (int k = 0; k <= 12; ++k) EXPECT_EQ(p[static_cast<std::size_t>(k)], brute_partitions(k)) << k;
  EXPECT_EQ(p[26], brute_partitions(26));
  EXPECT_EQ(partition_numbers(0).size(), 1u);
}

TEST(Eta, CentralChargeExponent) {
  const auto e = eta_inverse_power({R(1, 2), R(0)}, Variable::q, 2);
  const CPoly c = CPoly::c();
  EXPECT_EQ(e.series[0], CPoly(1));
  EXPECT_EQ(e.series[1], c * R(1, 2));
  EXPECT_EQ(e.series[2], c * (c + CPoly(6)) * R(1, 8));
  EXPECT_EQ(e.prefactor.c_coefficient, R(-1, 48));

  const auto hat = eta_inverse_power({R(1, 2), R(0)}, Variable::qhat, 4);
  EXPECT_EQ(hat.series[2], c * R(1, 2));
  EXPECT_TRUE(is_zero(hat.series[3]));
  EXPECT_EQ(hat.prefactor.c_coefficient, R(-1, 24));
}

TEST(Eta, TrivialAndPartitionExponents) {
  const auto zero = eta_inverse_power({R(0), R(0)}, Variable::q, 10);
  EXPECT_EQ(zero.series, Series<CPoly>::one(Variable::q, 10));
  const auto one = require_constant(eta_inverse_power({R(0), R(1)}, Variable::q, 40).series);
  for (int k = 0; k <= 40; ++k) EXPECT_EQ(one[k], Rational(brute_partitions(k))) << k;
}
