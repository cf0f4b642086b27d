#include <gtest/gtest.h>

#include "pfaff/families.hpp"
#include "pfaff/ideal.hpp"
#include "pfaff/twisted.hpp"

using namespace pfaff;

namespace {

constexpr int N = 3;

Polynomial x(int i) { return Polynomial::variable(N + 1, i); }
ExtForm dx(int i) { return ExtForm::differential(N, i); }

bool integrable(const ExtForm& w) { return frobenius_check(PfaffGenerators(w.n(), {w})); }

RationalMatrix identity(int size) {
  RationalMatrix m(size, std::vector<Rational>(size, Rational(0)));
  for (int i = 0; i < size; ++i) m[i][i] = 1;
  return m;
}

/// Family moved by t along a direction.
RationalFamily shifted(const RationalFamily& f, const RationalDirection& d, long t) {
  RationalFamily g = f;
  if (!d.dF.is_zero()) g.F += Rational(t) * d.dF;
  if (!d.dG.is_zero()) g.G += Rational(t) * d.dG;
  return g;
}

LogarithmicFamily shifted(const LogarithmicFamily& f, const LogarithmicDirection& d, long t) {
  LogarithmicFamily g = f;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    if (!d.dfactors[i].is_zero()) g.factors[i] += Rational(t) * d.dfactors[i];
    g.residues[i] += Rational(t) * d.dresidues[i];
  }
  return g;
}

/// Five-point stencil; exact for curves of degree at most 4 in t.
template <class Fam, class Dir>
ExtForm stencil_derivative(const Fam& f, const Dir& d) {
  auto at = [&](long t) { return family_form(Family(shifted(f, d, t))); };
  return make_rational(1, 12) * (at(-2) - Rational(8) * at(-1) + Rational(8) * at(1) - at(2));
}

}  // namespace

TEST(RationalForm, Examples) {
  EXPECT_EQ(rational_form(x(0), x(1)), x(1) * dx(0) - x(0) * dx(1));
  EXPECT_THROW(rational_form(x(0), Polynomial(N + 1)), invalid_input);
}

TEST(RationalForm, DescendsAndIsIntegrable) {
  for (std::uint64_t s = 1; s <= 6; ++s)
    for (int a = 1; a <= 3; ++a) {
      const int b = 1 + static_cast<int>(s % 3);
      const RationalFamily fam = random_rational(N, {a, b}, s);
      const ExtForm w = rational_form(fam);
      EXPECT_TRUE(check_descent(w));
      EXPECT_EQ(w.weight(), a + b);
      EXPECT_TRUE(wedge(w, ext_d(w)).is_zero());
    }
}

TEST(LogarithmicForm, Examples) {
  const LogarithmicFamily two{N, {x(0), x(1)}, {Rational(1), Rational(-1)}};
  EXPECT_EQ(logarithmic_form(two), x(1) * dx(0) - x(0) * dx(1));
  const LogarithmicFamily bad{N, {x(0), x(1)}, {Rational(1), Rational(1)}};
  EXPECT_THROW(logarithmic_form(bad), invalid_input);
  const LogarithmicFamily lonely{N, {x(0)}, {Rational(0)}};
  EXPECT_THROW(logarithmic_form(lonely), invalid_input);
}

TEST(LogarithmicForm, RandomLinearFactorsAreIntegrable) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    LogarithmicFamily fam = random_logarithmic(N, {{1, 1, 1}}, s);
    fam.residues = {Rational(1), Rational(1), Rational(-2)};
    const ExtForm w = logarithmic_form(fam);
    EXPECT_TRUE(check_descent(w));
    EXPECT_TRUE(integrable(w));
    EXPECT_EQ(w.weight(), 3);
  }
  const LogarithmicFamily mixed = random_logarithmic(N, {{1, 2, 2}}, 9);
  EXPECT_TRUE(integrable(logarithmic_form(mixed)));
}

TEST(CurveDerivative, MatchesStencilOracle) {
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const RationalFamily r = random_rational(N, {1, 2}, s);
    for (const auto& dir : coordinate_directions(Family(r))) {
      const auto& d = std::get<RationalDirection>(dir);
      EXPECT_EQ(curve_derivative(r, d), stencil_derivative(r, d));
    }
    const LogarithmicFamily l = random_logarithmic(N, {{1, 1, 1}}, s);
    for (const auto& dir : coordinate_directions(Family(l))) {
      const auto& d = std::get<LogarithmicDirection>(dir);
      EXPECT_EQ(curve_derivative(l, d), stencil_derivative(l, d));
    }
  }
}

TEST(CurveDerivative, RationalExpansionAndZeroDirection) {
  const RationalFamily r{N, x(0), x(1) * x(2)};
  const Polynomial dF = x(3);
  const ExtForm expect = Rational(2) * (r.G * ext_d(ExtForm::function(N, dF))) -
                         Rational(1) * (dF * ext_d(ExtForm::function(N, r.G)));
  EXPECT_EQ(curve_derivative(r, RationalDirection{dF, Polynomial(N + 1)}), expect);
  EXPECT_TRUE(curve_derivative(r, RationalDirection{Polynomial(N + 1), Polynomial(N + 1)}).is_zero());
}

TEST(CurveDerivative, LinearInDirection) {
  Rng rng(5);
  const RationalFamily r = random_rational(N, {2, 1}, 5);
  for (int t = 0; t < 5; ++t) {
    const RationalDirection a{random_polynomial(rng, N + 1, 2, 3), random_polynomial(rng, N + 1, 1, 3)};
    const RationalDirection b{random_polynomial(rng, N + 1, 2, 3), random_polynomial(rng, N + 1, 1, 3)};
    const RationalDirection ab{a.dF + b.dF, a.dG + b.dG};
    const RationalDirection a3{Rational(3) * a.dF, Rational(3) * a.dG};
    EXPECT_EQ(curve_derivative(r, ab), curve_derivative(r, a) + curve_derivative(r, b));
    EXPECT_EQ(curve_derivative(r, a3), Rational(3) * curve_derivative(r, a));
    EXPECT_TRUE(check_descent(curve_derivative(r, a)));
  }
}

TEST(CurveDerivative, RejectsMismatchedDirections) {
  const RationalFamily r = random_rational(N, {1, 2}, 1);
  EXPECT_THROW(curve_derivative(r, RationalDirection{x(0) * x(1), Polynomial(N + 1)}), invalid_input);
  const LogarithmicFamily l = random_logarithmic(N, {{1, 1, 1}}, 1);
  LogarithmicDirection d{std::vector<Polynomial>(3, Polynomial(N + 1)), {Rational(1), Rational(0), Rational(0)}};
  EXPECT_THROW(curve_derivative(l, d), invalid_input);
  EXPECT_THROW(curve_derivative(Family(l), Direction(RationalDirection{})), invalid_input);
}

TEST(RandomInstance, DeterministicAndSeedSensitive) {
  EXPECT_EQ(random_rational(N, {2, 3}, 77), random_rational(N, {2, 3}, 77));
  EXPECT_NE(random_rational(N, {2, 3}, 77), random_rational(N, {2, 3}, 78));
  EXPECT_EQ(random_logarithmic(N, {{1, 2, 1}}, 5), random_logarithmic(N, {{1, 2, 1}}, 5));
  EXPECT_TRUE(check_descent(logarithmic_form(random_logarithmic(N, {{1, 2, 1}}, 5))));
  EXPECT_THROW(random_rational(N, {1, 1}, 1, 0), invalid_input);
}

TEST(LinearChange, IdentityAndPermutation) {
  const ExtForm w = rational_form(random_rational(N, {1, 2}, 3));
  EXPECT_EQ(linear_change(w, identity(N + 1)), w);
  RationalMatrix swap = identity(N + 1);
  swap[0][0] = swap[1][1] = 0;
  swap[0][1] = swap[1][0] = 1;
  EXPECT_EQ(linear_change(rational_form(x(0), x(1)), swap), -(x(1) * dx(0) - x(0) * dx(1)));
  RationalMatrix singular = identity(N + 1);
  singular[0][0] = 0;
  EXPECT_THROW(linear_change(w, singular), invalid_input);
}

TEST(LinearChange, GroupActionAndInvariants) {
  Rng rng(8);
  const ExtForm w = logarithmic_form(random_logarithmic(N, {{1, 1, 1}}, 8));
  for (int t = 0; t < 4; ++t) {
    const RationalMatrix M = random_invertible(rng, N + 1), K = random_invertible(rng, N + 1);
    EXPECT_EQ(linear_change(linear_change(w, M), K), linear_change(w, multiply(K, M)));
    const ExtForm moved = linear_change(w, M);
    EXPECT_EQ(moved.weight(), w.weight());
    EXPECT_TRUE(check_descent(moved));
    EXPECT_TRUE(integrable(moved));
  }
  const ExtForm contact = x(0) * dx(1) - x(1) * dx(0) + x(2) * dx(3) - x(3) * dx(2);
  EXPECT_FALSE(integrable(linear_change(contact, random_invertible(rng, N + 1))));
}
