#include <gtest/gtest.h>

#include "oracle.hpp"
#include "pfaff/linalg.hpp"
#include "pfaff/random.hpp"

using namespace pfaff;

namespace {

std::vector<SparseRow> random_rows(Rng& rng, std::size_t count, std::size_t width, int density) {
  std::vector<SparseRow> rows;
  for (std::size_t i = 0; i < count; ++i) {
    SparseRow r;
    for (std::size_t c = 0; c < width; ++c)
      if (rng.uniform(0, 99) < density) {
        const long v = static_cast<long>(rng.uniform(-4, 4));
        if (v != 0) r.emplace_back(c, Rational(v));
      }
    rows.push_back(r);
  }
  return rows;
}

oracle::Matrix dense(const std::vector<SparseRow>& rows, std::size_t width) {
  oracle::Matrix m(rows.size(), std::vector<Rational>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [c, v] : rows[i]) m[i][c] = v;
  return m;
}

}  // namespace

class LinalgProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(LinalgProperties, KernelIsCanonicalAndCorrect) {
  Rng rng(GetParam());
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t width = static_cast<std::size_t>(rng.uniform(1, 12));
    const auto eqs = random_rows(rng, static_cast<std::size_t>(rng.uniform(0, 10)), width, 40);
    const Subspace k = kernel(width, eqs);
    EXPECT_EQ(k.dim(), width - oracle::rank(dense(eqs, width)));
    for (const auto& v : k.rows())
      for (const auto& eq : eqs) {
        Rational dot(0);
        for (const auto& [c, a] : eq)
          if (const Rational* b = detail::find_entry(v, c)) dot += a * *b;
        EXPECT_EQ(dot, 0);
      }
    // the kernel's rows are already the canonical echelon basis of their span
    EXPECT_EQ(Subspace::span(width, k.rows()), k);
    EXPECT_EQ(Subspace::from_echelon(width, k.rows()), k);
  }
}

TEST_P(LinalgProperties, SumAndIntersectionDimensions) {
  Rng rng(GetParam() + 100);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t width = static_cast<std::size_t>(rng.uniform(1, 10));
    const Subspace a = Subspace::span(width, random_rows(rng, rng.uniform(0, 6), width, 50));
    const Subspace b = Subspace::span(width, random_rows(rng, rng.uniform(0, 6), width, 50));
    const Subspace s = sum(a, b), i = intersect(a, b);
    EXPECT_EQ(s.dim() + i.dim(), a.dim() + b.dim());
    EXPECT_TRUE(a.contains(i));
    EXPECT_TRUE(b.contains(i));
    EXPECT_TRUE(s.contains(a) && s.contains(b));
    EXPECT_EQ(Subspace::span(width, i.rows()), i);
    EXPECT_EQ(quotient_dim(a, b), s.dim() - b.dim());
  }
}

TEST_P(LinalgProperties, SpanIsOrderIndependent) {
  Rng rng(GetParam() + 200);
  const std::size_t width = 9;
  auto rows = random_rows(rng, 7, width, 50);
  const Subspace a = Subspace::span(width, rows);
  std::reverse(rows.begin(), rows.end());
  EXPECT_EQ(Subspace::span(width, rows), a);
  EXPECT_EQ(a.dim(), oracle::rank(dense(rows, width)));
}

INSTANTIATE_TEST_SUITE_P(Seeds, LinalgProperties, ::testing::Values(11u, 12u, 13u));

TEST(Linalg, KernelOnRestrictsToDomain) {
  // domain: span{e0 + e1, e2}; map: v -> v0 - v2 (on the 3 coordinates)
  const Subspace domain = Subspace::span(3, {make_row({{0, 1}, {1, 1}}), make_row({{2, 1}})});
  const std::vector<SparseRow> images{make_row({{0, 1}}), make_row({{0, -1}})};
  const Subspace k = kernel_on(domain, images);
  ASSERT_EQ(k.dim(), 1u);
  EXPECT_EQ(k, Subspace::span(3, {make_row({{0, 1}, {1, 1}, {2, 1}})}));
}

TEST(Linalg, FromEchelonRejectsNonCanonicalRows) {
  EXPECT_THROW(Subspace::from_echelon(3, {make_row({{0, 2}})}), invalid_input);
  EXPECT_THROW(Subspace::from_echelon(3, {make_row({{1, 1}}), make_row({{0, 1}})}), invalid_input);
  EXPECT_THROW(Subspace::from_echelon(3, {make_row({{0, 1}, {1, 1}}), make_row({{1, 1}})}), invalid_input);
  EXPECT_THROW(Subspace::from_echelon(3, {make_row({{0, 1}, {5, 1}})}), invalid_input);
}

TEST(Linalg, InsertRejectsOutOfRange) {
  Subspace s(2);
  EXPECT_THROW(s.insert(make_row({{2, 1}})), invalid_input);
}
