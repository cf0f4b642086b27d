#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pfaff/errors.hpp"
#include "pfaff/polynomial.hpp"

namespace pfaff {

/// Strictly increasing set of differential indices, stored as a bitmask.
/// Ordered lexicographically on the increasing index list.
class IndexTuple {
 public:
  static constexpr int kMaxIndex = 31;

  constexpr IndexTuple() = default;
  static IndexTuple from_mask(std::uint32_t mask) { return IndexTuple(mask); }
  static IndexTuple single(int i) {
    check_index(i);
    return IndexTuple(std::uint32_t{1} << i);
  }
  /// Throws unless the indices are strictly increasing.
  static IndexTuple of(const std::vector<int>& indices) {
    std::uint32_t mask = 0;
    int last = -1;
    for (int i : indices) {
      check_index(i);
      if (i <= last) throw invalid_input("index tuple must be strictly increasing");
      mask |= std::uint32_t{1} << i;
      last = i;
    }
    return IndexTuple(mask);
  }
  static IndexTuple of(std::initializer_list<int> indices) { return of(std::vector<int>(indices)); }

  std::uint32_t mask() const { return mask_; }
  int size() const { return std::popcount(mask_); }
  bool contains(int i) const { return (mask_ >> i) & 1u; }
  std::vector<int> indices() const {
    std::vector<int> out;
    for (int i = 0; i <= kMaxIndex; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }
  /// Number of members strictly below i.
  int count_below(int i) const { return std::popcount(mask_ & ((std::uint32_t{1} << i) - 1)); }

  IndexTuple with(int i) const { return IndexTuple(mask_ | (std::uint32_t{1} << i)); }
  IndexTuple without(int i) const { return IndexTuple(mask_ & ~(std::uint32_t{1} << i)); }

  friend bool operator==(IndexTuple a, IndexTuple b) { return a.mask_ == b.mask_; }
  friend bool operator<(IndexTuple a, IndexTuple b) {
    if (a.size() != b.size()) return a.size() < b.size();
    const std::uint32_t diff = a.mask_ ^ b.mask_;
    if (diff == 0) return false;
    const std::uint32_t lowest = diff & (~diff + 1);
    return (a.mask_ & lowest) != 0;
  }

 private:
  explicit constexpr IndexTuple(std::uint32_t mask) : mask_(mask) {}
  static void check_index(int i) {
    if (i < 0 || i > kMaxIndex) throw invalid_input("differential index out of range");
  }
  std::uint32_t mask_ = 0;
};

/// Sign of dx_I ∧ dx_J relative to the sorted tuple (0 when they overlap).
inline int wedge_sign(IndexTuple a, IndexTuple b) {
  if (a.mask() & b.mask()) return 0;
  int inversions = 0;
  for (int i : a.indices()) inversions += b.count_below(i);
  return (inversions & 1) ? -1 : 1;
}

/// All k-subsets of {0..n}, in IndexTuple order.
inline std::vector<IndexTuple> index_tuples(int n, int k) {
  std::vector<IndexTuple> out;
  if (k < 0 || k > n + 1) return out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(IndexTuple::of(cur));
      return;
    }
    for (int i = start; i <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Polynomial exterior k-form on C^{n+1}: Σ_I f_I dx_I with homogeneous
/// coefficients of a common degree c. Its weight is c + k.
class ExtForm {
 public:
  using CoeffMap = std::map<IndexTuple, Polynomial>;

  ExtForm() = default;
  ExtForm(int n, int k) : n_(n), k_(k) {
    if (n < 0 || n >= IndexTuple::kMaxIndex) throw invalid_input("ambient index bound out of range");
    if (k < 0) throw invalid_input("negative form degree");
  }

  static ExtForm zero(int n, int k) { return ExtForm(n, k); }
  static ExtForm function(int n, const Polynomial& p) {
    ExtForm f(n, 0);
    f.add_term(IndexTuple(), p);
    return f;
  }
  static ExtForm differential(int n, int i) {
    if (i < 0 || i > n) throw invalid_input("differential index out of range");
    ExtForm f(n, 1);
    f.add_term(IndexTuple::single(i), Polynomial::constant(n + 1, Rational(1)));
    return f;
  }
  /// Validates tuple sizes and that all coefficients share a degree.
  static ExtForm from_terms(int n, int k, const CoeffMap& coeffs) {
    ExtForm f(n, k);
    for (const auto& [t, p] : coeffs) f.add_term(t, p);
    return f;
  }

  int n() const { return n_; }
  int nvars() const { return n_ + 1; }
  int k() const { return k_; }
  bool is_zero() const { return coeffs_.empty(); }
  const CoeffMap& coeffs() const { return coeffs_; }
  std::size_t term_count() const {
    std::size_t s = 0;
    for (const auto& [t, p] : coeffs_) s += p.size();
    return s;
  }

  Polynomial coefficient(IndexTuple t) const {
    auto it = coeffs_.find(t);
    return it == coeffs_.end() ? Polynomial(nvars()) : it->second;
  }

  /// Degree of the coefficient polynomials; nullopt for the zero form.
  std::optional<int> coefficient_degree() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.begin()->second.degree();
  }
  /// e = coefficient degree + k; nullopt ("any") for the zero form.
  std::optional<int> weight() const {
    auto c = coefficient_degree();
    if (!c) return std::nullopt;
    return *c + k_;
  }

  void add_term(IndexTuple t, const Polynomial& p) {
    if (t.size() != k_) throw invalid_input("index tuple size does not match form degree");
    if (!t.indices().empty() && t.indices().back() > n_)
      throw invalid_input("differential index exceeds ambient bound");
    if (p.nvars() != nvars()) throw invalid_input("coefficient over wrong variable set");
    if (p.is_zero()) return;
    if (auto c = coefficient_degree(); c && *c != *p.degree())
      throw invalid_input("mixed coefficient degrees in form: " + std::to_string(*p.degree()) +
                          " vs " + std::to_string(*c));
    auto [it, inserted] = coeffs_.try_emplace(t, p);
    if (!inserted) {
      it->second += p;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }
  void add_term(IndexTuple t, const Monomial& m, const Rational& c) {
    add_term(t, Polynomial::monomial(m, c));
  }

  ExtForm& operator+=(const ExtForm& o) {
    check_same_type(o);
    auto w = weight(), wo = o.weight();
    if (w && wo && *w != *wo)
      throw invalid_input("weight mismatch in form sum: " + std::to_string(*w) + " vs " +
                          std::to_string(*wo));
    for (const auto& [t, p] : o.coeffs_) add_term(t, p);
    return *this;
  }
  ExtForm& operator-=(const ExtForm& o) { return *this += -o; }
  ExtForm& operator*=(const Rational& s) {
    if (s == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [t, p] : coeffs_) p *= s;
    return *this;
  }

  friend ExtForm operator+(ExtForm a, const ExtForm& b) { return a += b; }
  friend ExtForm operator-(ExtForm a, const ExtForm& b) { return a -= b; }
  friend ExtForm operator-(ExtForm a) { return a *= Rational(-1); }
  friend ExtForm operator*(ExtForm a, const Rational& s) { return a *= s; }
  friend ExtForm operator*(const Rational& s, ExtForm a) { return a *= s; }
  friend ExtForm operator*(const Polynomial& f, const ExtForm& a) {
    ExtForm r(a.n_, a.k_);
    for (const auto& [t, p] : a.coeffs_) r.add_term(t, f * p);
    return r;
  }

  bool operator==(const ExtForm& o) const {
    return n_ == o.n_ && k_ == o.k_ && coeffs_ == o.coeffs_;
  }

  /// Text in the input grammar: "x1*d0 - x0*d1", "d0*d1", "0".
  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, p] : coeffs_) {
      for (const auto& [m, c] : p.terms()) {
        Rational a = abs(c);
        if (c < 0)
          os << (first ? "-" : " - ");
        else if (!first)
          os << " + ";
        first = false;
        bool wrote = false;
        if (a != 1 || (m.degree() == 0 && t.size() == 0)) {
          os << a.get_str();
          wrote = true;
        }
        Polynomial::write_monomial(os, m, wrote);
        for (int i : t.indices()) {
          if (wrote) os << '*';
          os << 'd' << i;
          wrote = true;
        }
      }
    }
    return os.str();
  }

 private:
  void check_same_type(const ExtForm& o) const {
    if (n_ != o.n_) throw invalid_input("forms over different ambient spaces");
    if (k_ != o.k_) throw invalid_input("form degree mismatch in sum");
  }

  int n_ = 0;
  int k_ = 0;
  CoeffMap coeffs_;
};

inline std::optional<int> weight(const ExtForm& a) { return a.weight(); }

inline ExtForm wedge(const ExtForm& a, const ExtForm& b) {
  if (a.n() != b.n()) throw invalid_input("wedge of forms over different ambient spaces");
  ExtForm r(a.n(), a.k() + b.k());
  for (const auto& [ta, pa] : a.coeffs()) {
    for (const auto& [tb, pb] : b.coeffs()) {
      const int s = wedge_sign(ta, tb);
      if (s == 0) continue;
      Polynomial prod = pa * pb;
      if (s < 0) prod = -prod;
      r.add_term(IndexTuple::from_mask(ta.mask() | tb.mask()), prod);
    }
  }
  return r;
}

/// Wedge of a list of forms, left to right. Empty list gives the constant 1.
inline ExtForm wedge_all(int n, const std::vector<ExtForm>& forms) {
  ExtForm r = ExtForm::function(n, Polynomial::constant(n + 1, Rational(1)));
  for (const auto& f : forms) r = wedge(r, f);
  return r;
}

/// Exterior derivative d(Σ f_I dx_I) = Σ_i ∂_i f_I dx_i ∧ dx_I.
inline ExtForm ext_d(const ExtForm& a) {
  ExtForm r(a.n(), a.k() + 1);
  for (const auto& [t, p] : a.coeffs()) {
    for (int i = 0; i <= a.n(); ++i) {
      if (t.contains(i)) continue;
      Polynomial dp = p.partial(i);
      if (dp.is_zero()) continue;
      if (t.count_below(i) & 1) dp = -dp;
      r.add_term(t.with(i), dp);
    }
  }
  return r;
}

/// Interior product with the radial field R = Σ x_i ∂/∂x_i.
inline ExtForm contract_radial(const ExtForm& a) {
  if (a.k() == 0) throw invalid_input("radial contraction of a 0-form");
  ExtForm r(a.n(), a.k() - 1);
  const int nv = a.nvars();
  for (const auto& [t, p] : a.coeffs()) {
    int pos = 0;
    for (int i : t.indices()) {
      Polynomial term = Polynomial::variable(nv, i) * p;
      if (pos & 1) term = -term;
      r.add_term(t.without(i), term);
      ++pos;
    }
  }
  return r;
}

}  // namespace pfaff
