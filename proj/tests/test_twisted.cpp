#include <gtest/gtest.h>

#include "pfaff/random.hpp"
#include "pfaff/twisted.hpp"

using namespace pfaff;

namespace {

constexpr int N = 3;

Polynomial x(int i) { return Polynomial::variable(N + 1, i); }
ExtForm fx(int i) { return ExtForm::function(N, x(i)); }
ExtForm dx(int i) { return ExtForm::differential(N, i); }
Rational sign(int parity) { return (parity & 1) ? Rational(-1) : Rational(1); }

/// Nonzero random descended form with k in [0, 1] and weight k+1 or k+2.
ExtForm pick(Rng& rng) {
  for (;;) {
    const int k = static_cast<int>(rng.uniform(0, 1));
    ExtForm f = random_descended_form(rng, N, k, k + 1 + static_cast<int>(rng.uniform(0, 1)), 3);
    if (!f.is_zero()) return f;
  }
}

}  // namespace

TEST(SecondMul, LinearFunctions) {
  EXPECT_EQ(second_mul(fx(0), fx(1)), make_rational(1, 2) * (x(0) * dx(1) - x(1) * dx(0)));
}

TEST(SecondMul, ConstantsGiveZero) {
  const ExtForm c = ExtForm::function(N, Polynomial::constant(N + 1, Rational(5)));
  const ExtForm w = x(1) * dx(0) - x(0) * dx(1);
  EXPECT_TRUE(second_mul(c, w).is_zero());
  EXPECT_TRUE(second_mul(w, c).is_zero());
  EXPECT_EQ(second_mul(c, w).k(), 2);
}

TEST(SecondMul, RequiresDescendedOperands) {
  EXPECT_THROW(second_mul(dx(0), fx(1)), invalid_input);
}

TEST(Descent, Examples) {
  EXPECT_TRUE(check_descent(x(1) * dx(0) - x(0) * dx(1)));
  EXPECT_FALSE(check_descent(dx(0)));
  EXPECT_TRUE(check_descent(fx(2)));
}

TEST(ChartDerivative, Examples) {
  EXPECT_TRUE(verify_chart_derivative(fx(0), x(1)));
  EXPECT_EQ(x(1) * dx(0) - x(0) * dx(1), Rational(2) * second_mul(fx(1), fx(0)));
  const ExtForm c = ExtForm::function(N, Polynomial::constant(N + 1, Rational(3)));
  EXPECT_TRUE(verify_chart_derivative(c, x(2)));
  EXPECT_THROW(verify_chart_derivative(fx(0), x(0) * x(1)), invalid_input);
}

class TwistedProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(TwistedProperties, AlgebraLaws) {
  Rng rng(GetParam());
  for (int trial = 0; trial < 8; ++trial) {
    const ExtForm a = pick(rng), b = pick(rng), c = pick(rng);
    const int k = a.k(), k2 = b.k(), k3 = c.k();
    const int e = *a.weight(), e2 = *b.weight(), e3 = *c.weight();

    const ExtForm ab = second_mul(a, b);
    EXPECT_TRUE(check_descent(ab));
    EXPECT_EQ(ab.k(), k + k2 + 1);
    if (!ab.is_zero()) {
      EXPECT_EQ(*ab.weight(), e + e2);
    }

    EXPECT_EQ(second_mul(ab, c), second_mul(a, second_mul(b, c)));
    EXPECT_EQ(ab, sign((k + 1) * (k2 + 1)) * second_mul(b, a));

    // a * (b ∧ c) = (e+e')/(e+e'+e'') (a*b)∧c + (−1)^{k'k''} (e+e'')/(e+e'+e'') (a*c)∧b
    const ExtForm lhs = second_mul(a, wedge(b, c));
    const ExtForm rhs = make_rational(e + e2, e + e2 + e3) * wedge(ab, c) +
                        sign(k2 * k3) * make_rational(e + e3, e + e2 + e3) * wedge(second_mul(a, c), b);
    EXPECT_EQ(lhs, rhs);

    const Polynomial chart = random_nonzero_polynomial(rng, N + 1, 1, 4);
    EXPECT_TRUE(verify_chart_derivative(a, chart));
  }
}

TEST_P(TwistedProperties, HigherDegreeChartIdentity) {
  Rng rng(GetParam() + 7);
  for (int k = 0; k <= 2; ++k) {
    const ExtForm f = random_descended_form(rng, N, k, k + 2, 3);
    EXPECT_TRUE(verify_chart_derivative(f, random_nonzero_polynomial(rng, N + 1, 1, 4)));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TwistedProperties, ::testing::Values(21u, 22u, 23u, 24u));
