#pragma once

#include <cstdint>
#include <random>

#include "pfaff/form.hpp"

namespace pfaff {

/// Seeded generator. mt19937_64 is fully specified by the standard and the
/// bounded draw below is ours, so sequences are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool coin() { return uniform(0, 1) == 1; }

 private:
  std::mt19937_64 engine_;
};

/// Dense random homogeneous polynomial, integer coefficients in [-height, height].
inline Polynomial random_polynomial(Rng& rng, int nvars, int degree, int height) {
  Polynomial p(nvars);
  if (degree < 0) return p;
  for (const auto& m : monomials_of_degree(nvars, degree))
    p.add_term(m, Rational(static_cast<long>(rng.uniform(-height, height))));
  return p;
}

/// Same, but resampled until nonzero.
inline Polynomial random_nonzero_polynomial(Rng& rng, int nvars, int degree, int height) {
  for (;;) {
    Polynomial p = random_polynomial(rng, nvars, degree, height);
    if (!p.is_zero()) return p;
  }
}

/// Random k-form of weight e on C^{n+1} (not necessarily descended).
inline ExtForm random_form(Rng& rng, int n, int k, int e, int height) {
  ExtForm f(n, k);
  if (e - k < 0) return f;
  for (IndexTuple t : index_tuples(n, k)) f.add_term(t, random_polynomial(rng, n + 1, e - k, height));
  return f;
}

/// Random descended k-form of weight e: the radial contraction of a random
/// (k+1)-form. Exactness of the Koszul complex makes these span the slot.
/// For k = 0 this is just a random polynomial of degree e.
inline ExtForm random_descended_form(Rng& rng, int n, int k, int e, int height) {
  if (k == 0) return ExtForm::function(n, random_polynomial(rng, n + 1, e, height));
  if (k > n) return ExtForm::zero(n, k);
  return contract_radial(random_form(rng, n, k + 1, e, height));
}

}  // namespace pfaff
