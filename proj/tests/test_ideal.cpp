#include <gtest/gtest.h>

#include "oracle.hpp"
#include "pfaff/families.hpp"
#include "pfaff/ideal.hpp"
#include "pfaff/twisted.hpp"

using namespace pfaff;

namespace {

constexpr int N = 3;

Polynomial x(int i) { return Polynomial::variable(N + 1, i); }
ExtForm dx(int i) { return ExtForm::differential(N, i); }
ExtForm pencil(int i, int j) { return x(j) * dx(i) - x(i) * dx(j); }

PfaffGenerators single(const ExtForm& w) { return PfaffGenerators(N, {w}); }

/// Kernel dimension of θ ↦ θ∧w on the descended slot, by dense elimination.
std::size_t wedge_kernel_oracle(const ExtForm& w, int k, int e) {
  const auto basis = oracle::extract_basis(oracle::descended_spanning_set(N, k, e));
  std::vector<ExtForm> images;
  for (const auto& b : basis) images.push_back(wedge(b, w));
  return oracle::kernel_dim(images);
}

}  // namespace

TEST(IdealSlot, PrimitiveGeneratorSpansItsOwnSlot) {
  Workspace ws;
  const auto g = single(pencil(0, 1));
  EXPECT_EQ(ideal_slot(g, 1, 2, ws).dim(), 1u);
  EXPECT_EQ(ideal_slot(g, 1, 1, ws).dim(), 0u);
  EXPECT_EQ(ideal_slot(g, 2, 1, ws).dim(), 0u);
}

TEST(IdealSlot, ContainsDifferentialOfGenerator) {
  Workspace ws;
  const auto g = single(pencil(0, 1));
  const auto basis = slot_basis(N, 2, 2, ws);
  // dω is not descended, so it lives in the ambient span only
  EXPECT_TRUE(ambient_ideal_span(g, 2, 2, ws).contains(basis->coords(ext_d(pencil(0, 1)))));
  EXPECT_FALSE(basis->descended.contains(basis->coords(ext_d(pencil(0, 1)))));
}

TEST(IdealSlot, MatchesBruteForceSpanDimension) {
  Workspace ws;
  const ExtForm w = rational_form(random_rational(N, {1, 2}, 5));
  const auto g = single(w);
  // oracle: span of descended θ ∈ (m∧ω + m'∧dω), computed as the intersection
  // dimension dim(A) + dim(D) − dim(A + D) with dense ranks
  for (int k = 1; k <= 3; ++k) {
    const int e = 4;
    std::vector<ExtForm> gens;
    for (const auto& m : oracle::monomial_forms(N, k - 1, e - 3)) gens.push_back(wedge(m, w));
    if (k >= 2)
      for (const auto& m : oracle::monomial_forms(N, k - 2, e - 3)) gens.push_back(wedge(m, ext_d(w)));
    const auto desc = oracle::extract_basis(oracle::descended_spanning_set(N, k, e));
    std::vector<ExtForm> both = gens;
    both.insert(both.end(), desc.begin(), desc.end());
    const std::size_t expect = oracle::rank_of_forms(gens) + desc.size() - oracle::rank_of_forms(both);
    EXPECT_EQ(ideal_slot(g, k, e, ws).dim(), expect) << "k=" << k;
  }
}

TEST(SumIdealSlot, SinglePartAndIdempotence) {
  Workspace ws;
  const auto a = single(rational_form(random_rational(N, {1, 1}, 3)));
  for (int k = 1; k <= 3; ++k) {
    const auto ia = ideal_slot(a, k, 3, ws);
    EXPECT_EQ(sum_ideal_slot({a}, k, 3, ws).space, ia.space);
    EXPECT_EQ(sum_ideal_slot({a, a}, k, 3, ws).space, ia.space);
  }
}

TEST(Frobenius, Examples) {
  EXPECT_TRUE(frobenius_check(single(pencil(0, 1))));
  const ExtForm contact = pencil(1, 0) + pencil(2, 3);
  EXPECT_FALSE(frobenius_check(single(contact)));
  for (std::uint64_t s = 1; s <= 5; ++s)
    EXPECT_TRUE(frobenius_check(single(rational_form(random_rational(N, {1, 2}, s)))));
}

TEST(Frobenius, SetsFlag) {
  PfaffGenerators g = single(pencil(0, 1));
  EXPECT_FALSE(g.flags.frobenius_verified.has_value());
  frobenius_check(g);
  EXPECT_EQ(g.flags.frobenius_verified, true);
}

TEST(TopWedge, Examples) {
  EXPECT_EQ(top_wedge(single(pencil(0, 1))), pencil(0, 1));
  const PfaffGenerators twice(N, {pencil(0, 1), pencil(0, 1)});
  EXPECT_TRUE(top_wedge(twice).is_zero());
  EXPECT_TRUE(singular_scheme(twice).degenerate);

  const PfaffGenerators two(N, {pencil(0, 1), pencil(2, 3)});
  const ExtForm w = top_wedge(two);
  EXPECT_EQ(w.k(), 2);
  // all six coordinate slots of a 2-form on C^4; dx0∧dx1 and dx2∧dx3 vanish
  EXPECT_EQ(index_tuples(N, 2).size(), 6u);
  const SingularSchemeGens s = singular_scheme(two);
  ASSERT_EQ(s.polys.size(), 4u);
  for (const auto& p : s.polys) EXPECT_EQ(p.degree(), 2);
  EXPECT_TRUE(w.coefficient(IndexTuple::of({0, 1})).is_zero());
  EXPECT_EQ(w.coefficient(IndexTuple::of({0, 2})), x(1) * x(3));
}

TEST(Primitivity, Examples) {
  EXPECT_TRUE(is_primitive(pencil(0, 1)));
  EXPECT_FALSE(is_primitive(x(0) * pencil(0, 1)));
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const LogarithmicFamily fam = random_logarithmic(N, {{1, 1, 1}}, s);
    PfaffGenerators g = single(logarithmic_form(fam));
    EXPECT_EQ(primitivity_check(g), std::vector<bool>{true});
    EXPECT_TRUE(g.flags.primitive.has_value());
  }
}

TEST(Probe, Examples) {
  const ProbeReport two = codim2_probe(std::vector<Polynomial>{x(0), x(1)}, 20, 1);
  EXPECT_EQ(two.hits, 0);
  EXPECT_EQ(two.trials, 20);
  EXPECT_TRUE(two.codim2_evidence());
  const ProbeReport one = codim2_probe(std::vector<Polynomial>{x(0)}, 20, 1);
  EXPECT_EQ(one.hits, 20);
  const ProbeReport none = codim2_probe(std::vector<Polynomial>{}, 20, 1);
  EXPECT_TRUE(none.empty);
  EXPECT_EQ(none.trials, 0);
  EXPECT_FALSE(none.codim2_evidence());
}

TEST(Probe, DeterministicInSeed) {
  const auto s = singular_scheme(single(rational_form(random_rational(N, {2, 2}, 4))));
  const auto a = codim2_probe(s, 10, 99), b = codim2_probe(s, 10, 99);
  EXPECT_EQ(a.hits, b.hits);
}

TEST(Saturation, PencilSlotMatchesBruteForce) {
  Workspace ws;
  const auto g = single(pencil(1, 0));
  EXPECT_EQ(saturation_slot(g, 1, 2, std::nullopt, ws).dim(), 1u);
  for (int k = 1; k <= 3; ++k)
    for (int e = k + 1; e <= 4; ++e)
      EXPECT_EQ(saturation_slot(g, k, e, std::nullopt, ws).dim(), wedge_kernel_oracle(pencil(1, 0), k, e));
}

TEST(Saturation, ContainsIdealAndIsFullPastCodimension) {
  Workspace ws;
  const std::vector<PfaffGenerators> cases{
      single(rational_form(random_rational(N, {1, 2}, 8))),
      single(logarithmic_form(random_logarithmic(N, {{1, 1, 1}}, 8))),
      PfaffGenerators(N, {pencil(0, 1), pencil(2, 3)})};
  for (const auto& g : cases) {
    const std::size_t r = generic_rank(g);
    for (int k = 1; k <= N; ++k)
      for (int e = k + 1; e <= 5; ++e) {
        const auto sat = saturation_slot(g, k, e, std::nullopt, ws);
        EXPECT_TRUE(sat.space.contains(ideal_slot(g, k, e, ws).space));
        if (k > N - static_cast<int>(r)) {
          EXPECT_EQ(sat.dim(), slot_basis(N, k, e, ws)->dim());
        }
      }
  }
}

TEST(Saturation, RankMisdeclaredIsInvalidInput) {
  Workspace ws;
  const PfaffGenerators twice(N, {pencil(0, 1), pencil(0, 1)});
  EXPECT_EQ(generic_rank(twice), 1u);
  EXPECT_THROW(saturation_slot(twice, 1, 2, 2, ws), invalid_input);
}

TEST(Saturation, Idempotent) {
  Workspace ws;
  const ExtForm w = rational_form(random_rational(N, {1, 2}, 6));
  const auto g = single(w);
  const auto sat = saturation_slot(g, 2, 4, std::nullopt, ws);
  const auto basis = slot_basis(N, 2, 4, ws);
  Subspace again(basis->ambient_dim());
  for (const auto& row : sat.space.rows())
    if (wedge(basis->form(row), w).is_zero()) again.insert(row);
  EXPECT_EQ(again, sat.space);
}

class IdealStability : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(IdealStability, DerivativeWedgeAndChartStability) {
  Workspace ws;
  const std::uint64_t seed = GetParam();
  const ExtForm w = seed % 2 ? rational_form(random_rational(N, {1, 1}, seed))
                             : logarithmic_form(random_logarithmic(N, {{1, 1, 1}}, seed));
  const auto g = single(w);
  const int e0 = *w.weight();
  Rng rng(seed);
  for (int k = 1; k <= 2; ++k)
    for (int e = e0; e <= e0 + 1; ++e) {
      const auto basis = slot_basis(N, k, e, ws);
      const auto ideal = ideal_slot(g, k, e, ws), sat = saturation_slot(g, k, e, std::nullopt, ws);
      const auto up = slot_basis(N, k + 1, e + 1, ws);
      const auto ideal_up = ideal_slot(g, k + 1, e + 1, ws), sat_up = saturation_slot(g, k + 1, e + 1, std::nullopt, ws);
      const Subspace ambient_next = ambient_ideal_span(g, k + 1, e, ws);
      const auto next = slot_basis(N, k + 1, e, ws);
      for (const auto& row : ideal.space.rows()) {
        const ExtForm th = basis->form(row);
        EXPECT_TRUE(ambient_next.contains(next->coords(ext_d(th))));
        for (int i = 0; i <= N; ++i)
          EXPECT_TRUE(ideal_up.space.contains(up->coords(second_mul(ExtForm::function(N, x(i)), th))));
        const ExtForm b = random_descended_form(rng, N, 1, 2, 3);
        if (!b.is_zero()) {
          EXPECT_TRUE(ideal_slot(g, k + 1, e + 2, ws).space.contains(slot_basis(N, k + 1, e + 2, ws)->coords(wedge(b, th))));
        }
      }
      for (const auto& row : sat.space.rows()) {
        const ExtForm th = basis->form(row);
        EXPECT_TRUE(wedge(ext_d(th), w).is_zero());
        for (int i = 0; i <= N; ++i)
          EXPECT_TRUE(sat_up.space.contains(up->coords(second_mul(ExtForm::function(N, x(i)), th))));
      }
    }
}

TEST_P(IdealStability, LinearChangeTransportsIdealSlots) {
  Workspace ws;
  const std::uint64_t seed = GetParam();
  const ExtForm w = rational_form(random_rational(N, {1, 2}, seed));
  Rng rng(seed + 50);
  const RationalMatrix M = random_invertible(rng, N + 1);
  const auto g = single(w), gm = single(linear_change(w, M));
  for (int k = 1; k <= 2; ++k) {
    const int e = 4;
    const auto basis = slot_basis(N, k, e, ws);
    const auto ideal = ideal_slot(g, k, e, ws);
    Subspace moved(basis->ambient_dim());
    for (const auto& row : ideal.space.rows()) moved.insert(basis->coords(linear_change(basis->form(row), M)));
    EXPECT_EQ(moved, ideal_slot(gm, k, e, ws).space);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, IdealStability, ::testing::Values(31u, 32u, 33u));

TEST(Relations, Examples) {
  Workspace ws;
  const PfaffGenerators a = single(pencil(0, 1)), b = single(pencil(2, 3));
  EXPECT_EQ(relations_slot({a, b}, 1, 2, ws).dim(), 0u);
  const PfaffGenerators r = single(rational_form(random_rational(N, {1, 1}, 2)));
  for (int k = 1; k <= 3; ++k) {
    const auto rel = relations_slot({r, r}, k, 3, ws);
    EXPECT_EQ(rel.dim(), ideal_slot(r, k, 3, ws).dim());
  }
}

TEST(Relations, RankIdentity) {
  Workspace ws;
  const std::vector<PfaffGenerators> parts{single(rational_form(random_rational(N, {1, 1}, 11))),
                                           single(rational_form(random_rational(N, {1, 2}, 12)))};
  for (int k = 1; k <= 3; ++k)
    for (int e = k + 1; e <= 4; ++e) {
      const auto rel = relations_slot(parts, k, e, ws);
      EXPECT_EQ(rel.dim() + rel.sum_dim, rel.part_dims[0] + rel.part_dims[1]);
      EXPECT_EQ(rel.sum_dim, sum_ideal_slot(parts, k, e, ws).dim());
    }
}

TEST(Generators, RejectInvalidInput) {
  EXPECT_THROW(PfaffGenerators(N, {dx(0)}), invalid_input);
  EXPECT_THROW(PfaffGenerators(N, {ExtForm(N, 1)}), invalid_input);
  EXPECT_THROW(PfaffGenerators(N, {wedge(dx(0), dx(1))}), invalid_input);
}
