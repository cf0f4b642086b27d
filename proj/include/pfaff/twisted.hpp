#pragma once

#include "pfaff/form.hpp"
#include "pfaff/slots.hpp"

namespace pfaff {

/// True iff the form descends to P^n, i.e. its radial contraction vanishes.
/// Functions always descend.
inline bool check_descent(const ExtForm& a) {
  if (a.k() == 0) return true;
  return contract_radial(a).is_zero();
}

/// The second multiplication of twisted forms:
///
///   a * b = e/(e+e') a∧db − (−1)^k e'/(e+e') da∧b,   and 0 if e = 0 or e' = 0.
///
/// A nonzero descended form has e >= k with e = 0 only for constants, so
/// e + e' = 0 happens only inside the zero branch.
inline ExtForm second_mul(const ExtForm& a, const ExtForm& b) {
  if (a.n() != b.n()) throw invalid_input("second multiplication over different ambient spaces");
  if (!check_descent(a) || !check_descent(b))
    throw invalid_input("second multiplication needs descended operands");
  ExtForm zero(a.n(), a.k() + b.k() + 1);
  const auto ea = a.weight(), eb = b.weight();
  if (!ea || !eb || *ea == 0 || *eb == 0) return zero;
  const int e = *ea, e2 = *eb;
  const Rational s1 = make_rational(e, e + e2), s2 = make_rational(e2, e + e2);
  ExtForm r = s1 * wedge(a, ext_d(b));
  ExtForm t = s2 * wedge(ext_d(a), b);
  if (a.k() & 1)
    r += t;
  else
    r -= t;
  return r;
}

/// Cleared-denominator chart identity for d(f/x^e) on {x != 0}:
///   x·df − e·dx∧f = (e+1)·(x * f).
inline bool verify_chart_derivative(const ExtForm& f, const Polynomial& x) {
  if (x.is_zero() || x.degree() != 1) throw invalid_input("chart coordinate must be a nonzero linear form");
  if (x.nvars() != f.nvars()) throw invalid_input("chart coordinate over wrong variable set");
  const auto w = f.weight();
  if (!w) return true;
  const int e = *w;
  const ExtForm xf = ExtForm::function(f.n(), x);
  ExtForm lhs = x * ext_d(f);
  lhs -= Rational(e) * wedge(ext_d(xf), f);
  const ExtForm rhs = Rational(e + 1) * second_mul(xf, f);
  return lhs == rhs;
}

}  // namespace pfaff
