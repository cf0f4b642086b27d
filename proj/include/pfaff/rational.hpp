#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "pfaff/errors.hpp"

namespace pfaff {

/// Exact rational number, always kept in lowest terms with positive denominator.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw invalid_input("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p" or "p/q" (optional leading sign on p).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid = [](std::string_view part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid(num, true) || !valid(den, false))
    throw invalid_input("malformed rational '" + s + "'");
  mpz_class n(num), d(den);
  if (d == 0) throw invalid_input("rational with zero denominator: '" + s + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace pfaff
