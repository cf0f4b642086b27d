#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "pfaff/errors.hpp"
#include "pfaff/rational.hpp"

namespace pfaff {

/// Sparse vector: (column, value) pairs, strictly increasing columns, no zeros.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

namespace detail {

// a + s*b
inline SparseRow axpy(const SparseRow& a, const Rational& s, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      out.emplace_back(ib->first, s * ib->second);
      ++ib;
    } else {
      Rational v = ia->second + s * ib->second;
      if (v != 0) out.emplace_back(ia->first, std::move(v));
      ++ia;
      ++ib;
    }
  }
  return out;
}

inline const Rational* find_entry(const SparseRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  return (it != row.end() && it->first == col) ? &it->second : nullptr;
}

inline void scale(SparseRow& row, const Rational& s) {
  for (auto& [c, v] : row) v *= s;
}

}  // namespace detail

/// Builds a SparseRow from unsorted (column, value) pairs, summing duplicates.
inline SparseRow make_row(std::vector<std::pair<std::size_t, Rational>> entries) {
  std::map<std::size_t, Rational> acc;
  for (auto& [c, v] : entries) acc[c] += v;
  SparseRow out;
  for (auto& [c, v] : acc)
    if (v != 0) out.emplace_back(c, v);
  return out;
}

/// Linear subspace of Q^N held as its reduced row-echelon basis. The echelon
/// form is unique, so equal subspaces compare equal row-for-row.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {}

  static Subspace full(std::size_t n) {
    Subspace s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.rows_.push_back(SparseRow{{i, Rational(1)}});
      s.pivots_.push_back(i);
    }
    return s;
  }

  static Subspace span(std::size_t n, const std::vector<SparseRow>& vectors) {
    Subspace s(n);
    for (const auto& v : vectors) s.insert(v);
    return s;
  }

  /// Accepts rows that are already in canonical reduced echelon form; throws
  /// invalid_input otherwise.
  static Subspace from_echelon(std::size_t n, std::vector<SparseRow> rows) {
    Subspace s(n);
    std::size_t last = 0;
    bool first = true;
    for (const auto& r : rows) {
      if (r.empty() || r.front().second != 1) throw invalid_input("echelon row without unit pivot");
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].first >= n) throw invalid_input("echelon entry outside ambient space");
        if (r[i].second == 0) throw invalid_input("explicit zero in echelon row");
        if (i > 0 && r[i].first <= r[i - 1].first) throw invalid_input("unsorted echelon row");
      }
      if (!first && r.front().first <= last) throw invalid_input("echelon pivots not increasing");
      last = r.front().first;
      first = false;
      s.pivots_.push_back(r.front().first);
    }
    for (const auto& r : rows)
      for (std::size_t i = 1; i < r.size(); ++i)
        if (std::binary_search(s.pivots_.begin(), s.pivots_.end(), r[i].first))
          throw invalid_input("echelon row not reduced at a pivot column");
    s.rows_ = std::move(rows);
    return s;
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// v minus its projection along the pivot columns; zero iff v is in the span.
  SparseRow reduce(const SparseRow& v) const {
    // rows are zero at all foreign pivots, so only v's own pivot entries matter
    SparseRow r = v;
    std::size_t pi = 0;
    for (const auto& [c, val] : v) {
      while (pi < pivots_.size() && pivots_[pi] < c) ++pi;
      if (pi < pivots_.size() && pivots_[pi] == c) r = detail::axpy(r, -val, rows_[pi]);
    }
    return r;
  }

  bool contains(const SparseRow& v) const { return reduce(v).empty(); }
  bool contains(const Subspace& o) const {
    for (const auto& r : o.rows_)
      if (!contains(r)) return false;
    return true;
  }

  /// Adds v to the span; returns true when the dimension grows.
  bool insert(const SparseRow& v) {
    for ([[maybe_unused]] const auto& [c, val] : v)
      if (c >= ambient_dim_) throw invalid_input("vector outside ambient space");
    SparseRow r = reduce(v);
    if (r.empty()) return false;
    const std::size_t p = r.front().first;
    detail::scale(r, 1 / Rational(r.front().second));
    for (auto& row : rows_)
      if (const Rational* e = detail::find_entry(row, p)) row = detail::axpy(row, -*e, r);
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(r));
    return true;
  }

  bool operator==(const Subspace& o) const {
    return ambient_dim_ == o.ambient_dim_ && rows_ == o.rows_;
  }

 private:
  friend Subspace kernel(std::size_t, const std::vector<SparseRow>&);
  friend Subspace kernel_on(const Subspace&, const std::vector<SparseRow>&);

  std::size_t ambient_dim_ = 0;
  std::vector<SparseRow> rows_;
  std::vector<std::size_t> pivots_;
};

/// Null space {v ∈ Q^unknowns : eq·v = 0 for every equation row}.
///
/// The equations are echelonized with pivots taken at the LARGEST column.
/// The resulting free-column kernel vectors then already form the canonical
/// echelon basis (leading entry at the free column, zero at other free columns).
inline Subspace kernel(std::size_t unknowns, const std::vector<SparseRow>& equations) {
  const auto flip = [unknowns](std::size_t c) { return unknowns - 1 - c; };
  Subspace rowspace(unknowns);
  for (const auto& eq : equations) {
    SparseRow rev;
    rev.reserve(eq.size());
    for (auto it = eq.rbegin(); it != eq.rend(); ++it) {
      if (it->first >= unknowns) throw invalid_input("equation outside unknown space");
      rev.emplace_back(flip(it->first), it->second);
    }
    rowspace.insert(rev);
  }
  std::vector<bool> is_pivot(unknowns, false);
  std::vector<std::size_t> orig_pivot(rowspace.dim());
  for (std::size_t r = 0; r < rowspace.dim(); ++r) {
    orig_pivot[r] = flip(rowspace.pivots()[r]);
    is_pivot[orig_pivot[r]] = true;
  }
  std::map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> entries;
  for (std::size_t c = 0; c < unknowns; ++c)
    if (!is_pivot[c]) entries[c].emplace_back(c, Rational(1));
  for (std::size_t r = 0; r < rowspace.dim(); ++r)
    for (const auto& [rc, val] : rowspace.rows()[r]) {
      const std::size_t c = flip(rc);
      if (c == orig_pivot[r]) continue;
      entries[c].emplace_back(orig_pivot[r], -val);
    }
  Subspace out(unknowns);
  for (auto& [free_col, e] : entries) {
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.pivots_.push_back(free_col);
    out.rows_.push_back(SparseRow(e.begin(), e.end()));
  }
  return out;
}

/// Kernel of a linear map restricted to a subspace: images[i] is the image
/// of domain.rows()[i] in any target coordinate system.
inline Subspace kernel_on(const Subspace& domain, const std::vector<SparseRow>& images) {
  if (images.size() != domain.dim()) throw invalid_input("one image per domain basis row required");
  std::map<std::size_t, SparseRow> by_target;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (const auto& [t, v] : images[i]) by_target[t].emplace_back(i, v);
  std::vector<SparseRow> equations;
  equations.reserve(by_target.size());
  for (auto& [t, row] : by_target) equations.push_back(std::move(row));
  const Subspace coeffs = kernel(domain.dim(), equations);
  // α in echelon form and domain rows in echelon form give Σ α_i row_i in
  // echelon form: the entry at domain pivot p_i is exactly α_i.
  Subspace out(domain.ambient_dim());
  for (const auto& alpha : coeffs.rows()) {
    SparseRow v;
    for (const auto& [i, a] : alpha) v = detail::axpy(v, a, domain.rows()[i]);
    out.pivots_.push_back(v.front().first);
    out.rows_.push_back(std::move(v));
  }
  return out;
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw invalid_input("sum of subspaces of different spaces");
  Subspace s = a;
  for (const auto& r : b.rows()) s.insert(r);
  return s;
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw invalid_input("intersection of subspaces of different spaces");
  std::vector<SparseRow> residuals;
  residuals.reserve(a.dim());
  for (const auto& r : a.rows()) residuals.push_back(b.reduce(r));
  return kernel_on(a, residuals);
}

/// dim((a + b) / b).
inline std::size_t quotient_dim(const Subspace& a, const Subspace& b) {
  return sum(a, b).dim() - b.dim();
}

/// Rank of a set of vectors.
inline std::size_t rank_of(std::size_t n, const std::vector<SparseRow>& vectors) {
  return Subspace::span(n, vectors).dim();
}

}  // namespace pfaff
