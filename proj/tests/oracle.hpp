#pragma once

// Independent reference computations for the test suite: dense Gaussian
// elimination over Q and coordinate vectors over explicitly enumerated
// monomial bases. Nothing here reuses the library's sparse elimination.

#include <map>
#include <utility>
#include <vector>

#include "pfaff/form.hpp"

namespace oracle {

using pfaff::ExtForm;
using pfaff::IndexTuple;
using pfaff::Monomial;
using pfaff::Rational;

using Matrix = std::vector<std::vector<Rational>>;

inline std::size_t rank(Matrix m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

inline long long binom(int a, int b) {
  if (b < 0 || a < b) return 0;
  long long r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

/// Assigns coordinates to (tuple, monomial) pairs on first sight.
class Coordinates {
 public:
  std::vector<Rational> vec(const ExtForm& f) {
    std::vector<Rational> out(ids_.size());
    for (const auto& [t, p] : f.coeffs())
      for (const auto& [m, c] : p.terms()) {
        const auto key = std::make_pair(t.mask(), m.exps);
        auto it = ids_.find(key);
        if (it == ids_.end()) {
          it = ids_.emplace(key, ids_.size()).first;
          out.resize(ids_.size());
        }
        out[it->second] += c;
      }
    return out;
  }

 private:
  std::map<std::pair<std::uint32_t, std::vector<int>>, std::size_t> ids_;
};

/// Rank of a family of forms, via columns in a fresh coordinate system.
inline std::size_t rank_of_forms(const std::vector<ExtForm>& forms) {
  Coordinates co;
  Matrix rows;
  for (const auto& f : forms) rows.push_back(co.vec(f));
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.size());
  for (auto& r : rows) r.resize(width);
  return rank(rows);
}

/// Dimension of the kernel of the linear map sending basis element i to images[i].
inline std::size_t kernel_dim(const std::vector<ExtForm>& images) {
  return images.size() - rank_of_forms(images);
}

/// All monomial k-forms of weight e on C^{n+1}.
inline std::vector<ExtForm> monomial_forms(int n, int k, int e) {
  std::vector<ExtForm> out;
  for (IndexTuple t : pfaff::index_tuples(n, k))
    for (const auto& m : pfaff::monomials_of_degree(n + 1, e - k)) {
      ExtForm f(n, k);
      f.add_term(t, m, Rational(1));
      out.push_back(f);
    }
  return out;
}

/// Spanning set of the descended slot (k,e): radial contractions of monomial (k+1)-forms.
inline std::vector<ExtForm> descended_spanning_set(int n, int k, int e) {
  std::vector<ExtForm> out;
  if (k == 0) return monomial_forms(n, 0, e);
  for (const auto& f : monomial_forms(n, k + 1, e)) {
    ExtForm c = pfaff::contract_radial(f);
    if (!c.is_zero()) out.push_back(c);
  }
  return out;
}

/// A basis extracted greedily from a spanning set.
inline std::vector<ExtForm> extract_basis(const std::vector<ExtForm>& spanning) {
  std::vector<ExtForm> basis;
  std::size_t r = 0;
  for (const auto& f : spanning) {
    basis.push_back(f);
    const std::size_t r2 = rank_of_forms(basis);
    if (r2 == r) basis.pop_back();
    else r = r2;
  }
  return basis;
}

}  // namespace oracle
