#pragma once

// Seeded property suite at desk scale. Every check is deterministic in the
// seed; the CLI exposes it as the `selftest` task.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pfaff/deformation.hpp"
#include "pfaff/families.hpp"
#include "pfaff/ideal.hpp"
#include "pfaff/random.hpp"
#include "pfaff/twisted.hpp"

namespace pfaff {

struct SelfCheck {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  bool passed() const { return failures == 0; }
};

namespace selftest_detail {

inline long long binom(int a, int b) {
  if (b < 0 || a < b) return 0;
  long long r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

class Recorder {
 public:
  explicit Recorder(std::string name) { check_.name = std::move(name); }
  void expect(bool ok, const std::string& what) {
    ++check_.cases;
    if (!ok && check_.failures++ == 0) check_.first_failure = what;
  }
  SelfCheck done() { return check_; }

 private:
  SelfCheck check_;
};

inline ExtForm scaled(const ExtForm& a, long s) { return Rational(s) * a; }

}  // namespace selftest_detail

inline std::vector<SelfCheck> run_selftest(std::uint64_t seed, Workspace& ws = default_workspace()) {
  using selftest_detail::Recorder;
  std::vector<SelfCheck> out;
  Rng rng(seed);
  constexpr int h = 3;

  {
    Recorder r("d squared vanishes");
    for (int t = 0; t < 20; ++t) {
      const int k = static_cast<int>(rng.uniform(0, 2)), e = static_cast<int>(rng.uniform(k, k + 3));
      const ExtForm a = random_form(rng, 3, k, e, h);
      r.expect(ext_d(ext_d(a)).is_zero(), a.to_string());
    }
    out.push_back(r.done());
  }
  {
    Recorder r("d and radial contraction are antiderivations");
    for (int t = 0; t < 20; ++t) {
      const int k = static_cast<int>(rng.uniform(1, 2)), k2 = static_cast<int>(rng.uniform(0, 1));
      const ExtForm a = random_form(rng, 3, k, k + static_cast<int>(rng.uniform(0, 2)), h);
      const ExtForm b = random_form(rng, 3, k2, k2 + static_cast<int>(rng.uniform(0, 2)), h);
      const long s = (k & 1) ? -1 : 1;
      r.expect(ext_d(wedge(a, b)) == wedge(ext_d(a), b) + selftest_detail::scaled(wedge(a, ext_d(b)), s), "d");
      ExtForm rhs = wedge(contract_radial(a), b);
      if (k2 > 0) rhs += selftest_detail::scaled(wedge(a, contract_radial(b)), s);
      r.expect(contract_radial(wedge(a, b)) == rhs, "i_R");
    }
    out.push_back(r.done());
  }
  {
    Recorder r("Cartan formula d i_R + i_R d = weight");
    for (int t = 0; t < 20; ++t) {
      const int k = static_cast<int>(rng.uniform(1, 2)), e = k + static_cast<int>(rng.uniform(0, 2));
      const ExtForm a = random_form(rng, 3, k, e, h);
      r.expect(ext_d(contract_radial(a)) + contract_radial(ext_d(a)) == Rational(e) * a, a.to_string());
    }
    out.push_back(r.done());
  }
  {
    Recorder r("slot dimensions match the closed form");
    for (int n = 1; n <= 3; ++n)
      for (int k = 0; k <= n; ++k)
        for (int e = k + (k > 0 ? 1 : 0); e <= 5; ++e) {
          const auto b = slot_basis(n, k, e, ws);
          const long long expect = k == 0 ? selftest_detail::binom(n + e, e)
                                          : selftest_detail::binom(e - 1, k) * selftest_detail::binom(n + e - k, e);
          r.expect(static_cast<long long>(b->dim()) == expect, slot_key({n, k, e}));
        }
    out.push_back(r.done());
  }
  {
    Recorder r("second multiplication identities");
    for (int t = 0; t < 15; ++t) {
      auto pick = [&] {
        const int k = static_cast<int>(rng.uniform(0, 1));
        return random_descended_form(rng, 3, k, k + static_cast<int>(rng.uniform(1, 2)), h);
      };
      const ExtForm a = pick(), b = pick(), c = pick();
      if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
      r.expect(second_mul(second_mul(a, b), c) == second_mul(a, second_mul(b, c)), "associativity");
      const long s = ((a.k() + 1) * (b.k() + 1)) & 1 ? -1 : 1;
      r.expect(second_mul(a, b) == selftest_detail::scaled(second_mul(b, a), s), "graded commutativity");
      r.expect(check_descent(second_mul(a, b)), "descent");
    }
    out.push_back(r.done());
  }
  {
    Recorder r("chart derivative identity");
    for (int t = 0; t < 15; ++t) {
      const int k = static_cast<int>(rng.uniform(0, 2));
      const ExtForm f = random_descended_form(rng, 3, k, k + static_cast<int>(rng.uniform(1, 2)), h);
      const Polynomial x = random_nonzero_polynomial(rng, 4, 1, h);
      r.expect(verify_chart_derivative(f, x), f.to_string());
    }
    out.push_back(r.done());
  }
  {
    Recorder r("saturation contains the ideal and is full past n - q");
    const PfaffGenerators pencil(3, {rational_form(random_rational(3, {1, 1}, seed + 1))});
    for (int k = 1; k <= 3; ++k)
      for (int e = k + 1; e <= 4; ++e) {
        const IdealSlot i = ideal_slot(pencil, k, e, ws), s = saturation_slot(pencil, k, e, std::nullopt, ws);
        r.expect(s.space.contains(i.space), "contains " + slot_key({3, k, e}));
        if (k > 2) r.expect(s.dim() == slot_basis(3, k, e, ws)->dim(), "full " + slot_key({3, k, e}));
      }
    out.push_back(r.done());
  }
  {
    Recorder r("curve derivatives lie in the tangent space");
    const RationalFamily fam = random_rational(3, {1, 2}, seed + 2);
    const TangentSlot ts = tangent_q1(rational_form(fam), std::nullopt, ws);
    r.expect(ts.contains({rational_form(fam)}, ws), "omega itself");
    for (const auto& dir : coordinate_directions(Family(fam)))
      r.expect(ts.contains({curve_derivative(Family(fam), dir)}, ws), "direction");
    out.push_back(r.done());
  }
  {
    Recorder r("Frobenius discriminates");
    const int n = 3;
    auto x = [&](int i) { return ExtForm::function(n, Polynomial::variable(n + 1, i)); };
    auto d = [&](int i) { return ExtForm::differential(n, i); };
    const ExtForm contact = wedge(x(0), d(1)) - wedge(x(1), d(0)) + wedge(x(2), d(3)) - wedge(x(3), d(2));
    r.expect(!frobenius_check(PfaffGenerators(n, {contact})), "contact form");
    r.expect(frobenius_check(PfaffGenerators(n, {rational_form(random_rational(n, {1, 2}, seed + 3))})),
             "rational form");
    out.push_back(r.done());
  }
  {
    Recorder r("relations rank identity");
    const std::vector<PfaffGenerators> parts{
        PfaffGenerators(3, {rational_form(random_rational(3, {1, 1}, seed + 4))}),
        PfaffGenerators(3, {rational_form(random_rational(3, {1, 1}, seed + 5))})};
    for (int k = 1; k <= 3; ++k) {
      const RelationsSlot rel = relations_slot(parts, k, k + 2, ws);
      std::size_t parts_total = 0;
      for (auto p : rel.part_dims) parts_total += p;
      r.expect(rel.dim() == parts_total - rel.sum_dim, slot_key({3, k, k + 2}));
    }
    out.push_back(r.done());
  }
  {
    Recorder r("component dimension of two disjoint pencils");
    const int n = 3;
    auto x = [&](int i) { return ExtForm::function(n, Polynomial::variable(n + 1, i)); };
    auto d = [&](int i) { return ExtForm::differential(n, i); };
    const std::vector<PfaffGenerators> parts{PfaffGenerators(n, {wedge(x(1), d(0)) - wedge(x(0), d(1))}),
                                             PfaffGenerators(n, {wedge(x(3), d(2)) - wedge(x(2), d(3))})};
    const ComponentDimReport rep = component_dimension(parts, ws);
    r.expect(rep.consistent && rep.all_hypothesis_b && rep.dmu_matches_direct, "disjoint pencils");
    out.push_back(r.done());
  }
  return out;
}

}  // namespace pfaff
