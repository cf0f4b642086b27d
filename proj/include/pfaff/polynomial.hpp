#pragma once

#include <compare>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pfaff/errors.hpp"
#include "pfaff/rational.hpp"

namespace pfaff {

/// Exponent vector of a monomial in x_0..x_{nvars-1}.
struct Monomial {
  std::vector<int> exps;

  Monomial() = default;
  explicit Monomial(std::vector<int> e) : exps(std::move(e)) {}

  static Monomial one(int nvars) { return Monomial(std::vector<int>(nvars, 0)); }
  static Monomial variable(int nvars, int i) {
    Monomial m = one(nvars);
    m.exps.at(i) = 1;
    return m;
  }

  int nvars() const { return static_cast<int>(exps.size()); }
  int degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

  Monomial operator*(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += o.exps[i];
    return r;
  }

  auto operator<=>(const Monomial&) const = default;
};

/// Global term order: lexicographic on the exponent vector, largest first
/// (x0^2 before x0*x1 before x1^2).
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const { return a.exps > b.exps; }
};

/// All monomials of total degree d in nvars variables, in MonomialOrder.
inline std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  if (d < 0 || nvars <= 0) return out;
  std::vector<int> e(nvars, 0);
  // recursive fill, first variable takes the largest exponent first
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == nvars - 1) {
      e[var] = left;
      out.emplace_back(e);
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[var] = a;
      self(self, var + 1, left - a);
    }
  };
  rec(rec, 0, d);
  return out;
}

/// Homogeneous polynomial with exact rational coefficients.
///
/// The zero polynomial has no degree and is compatible with every degree.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialOrder>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial::one(nvars), c);
    return p;
  }
  static Polynomial variable(int nvars, int i) {
    if (i < 0 || i >= nvars) throw invalid_input("variable index out of range");
    Polynomial p(nvars);
    p.add_term(Monomial::variable(nvars, i), Rational(1));
    return p;
  }
  static Polynomial monomial(const Monomial& m, const Rational& c = Rational(1)) {
    Polynomial p(m.nvars());
    p.add_term(m, c);
    return p;
  }
  /// Builds from raw terms; throws invalid_input when degrees differ.
  static Polynomial from_terms(int nvars, const TermMap& terms) {
    Polynomial p(nvars);
    for (const auto& [m, c] : terms) p.add_term(m, c);
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<int> degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.degree();
  }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Adds c*m; the monomial degree must agree with the current degree.
  void add_term(const Monomial& m, const Rational& c) {
    if (m.nvars() != nvars_) throw invalid_input("monomial has wrong number of variables");
    if (c == 0) return;
    if (!terms_.empty() && terms_.begin()->first.degree() != m.degree())
      throw invalid_input("inhomogeneous polynomial: degree " + std::to_string(m.degree()) +
                          " term added to degree " +
                          std::to_string(terms_.begin()->first.degree()) + " polynomial");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_compatible(o);
    if (!is_zero() && !o.is_zero() && *degree() != *o.degree())
      throw invalid_input("degree mismatch in polynomial sum: " + std::to_string(*degree()) +
                          " vs " + std::to_string(*o.degree()));
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  Polynomial pow(int e) const {
    if (e < 0) throw invalid_input("negative exponent");
    Polynomial r = constant(nvars_, Rational(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  /// Partial derivative with respect to x_i.
  Polynomial partial(int i) const {
    if (i < 0 || i >= nvars_) throw invalid_input("variable index out of range");
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m.exps[i] == 0) continue;
      Monomial mm = m;
      mm.exps[i] -= 1;
      r.add_term(mm, c * m.exps[i]);
    }
    return r;
  }

  /// Replaces x_i by images[i] (all images share one variable count).
  Polynomial substitute(std::span<const Polynomial> images) const {
    if (static_cast<int>(images.size()) != nvars_)
      throw invalid_input("substitution needs one image per variable");
    const int target = images.empty() ? 0 : images[0].nvars();
    Polynomial r(target);
    for (const auto& [m, c] : terms_) {
      Polynomial t = constant(target, c);
      for (int i = 0; i < nvars_; ++i)
        if (m.exps[i] > 0) t = t * images[i].pow(m.exps[i]);
      r += t;
    }
    return r;
  }

  Rational evaluate(std::span<const Rational> point) const {
    Rational total(0);
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < m.exps[i]; ++k) t *= point[i];
      total += t;
    }
    return total;
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  /// Text in the input grammar, e.g. "3/2*x0^2*x1 - x1^3".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      write_term(os, m, c, first);
      first = false;
    }
    return os.str();
  }

  static void write_monomial(std::ostream& os, const Monomial& m, bool& wrote) {
    for (int i = 0; i < m.nvars(); ++i) {
      if (m.exps[i] == 0) continue;
      if (wrote) os << '*';
      os << 'x' << i;
      if (m.exps[i] > 1) os << '^' << m.exps[i];
      wrote = true;
    }
  }

 private:
  void check_compatible(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw invalid_input("polynomials over different variable sets");
  }

  static void write_term(std::ostream& os, const Monomial& m, const Rational& c, bool first) {
    Rational a = abs(c);
    if (c < 0)
      os << (first ? "-" : " - ");
    else if (!first)
      os << " + ";
    bool wrote = false;
    if (a != 1 || m.degree() == 0) {
      os << a.get_str();
      wrote = true;
    }
    write_monomial(os, m, wrote);
  }

  int nvars_ = 0;
  TermMap terms_;
};

}  // namespace pfaff
