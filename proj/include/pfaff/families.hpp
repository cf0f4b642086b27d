#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pfaff/form.hpp"
#include "pfaff/linalg.hpp"
#include "pfaff/random.hpp"

namespace pfaff {

/// Rational foliation F^b / G^a: ω = b·G·dF − a·F·dG with a = deg F, b = deg G.
struct RationalFamily {
  int n = 1;
  Polynomial F, G;

  int a() const { return *F.degree(); }
  int b() const { return *G.degree(); }
  int weight() const { return a() + b(); }
  bool operator==(const RationalFamily&) const = default;
};

/// Logarithmic foliation: ω = Σ_i λ_i (Π_{j≠i} f_j) df_i with Σ λ_i deg f_i = 0.
struct LogarithmicFamily {
  int n = 1;
  std::vector<Polynomial> factors;
  std::vector<Rational> residues;

  int weight() const {
    int w = 0;
    for (const auto& f : factors) w += *f.degree();
    return w;
  }
  bool operator==(const LogarithmicFamily&) const = default;
};

using Family = std::variant<RationalFamily, LogarithmicFamily>;

/// Parameter perturbations matching a family's shape.
struct RationalDirection {
  Polynomial dF, dG;
};
struct LogarithmicDirection {
  std::vector<Polynomial> dfactors;
  std::vector<Rational> dresidues;
};
using Direction = std::variant<RationalDirection, LogarithmicDirection>;

namespace detail {

inline ExtForm df(int n, const Polynomial& f) { return ext_d(ExtForm::function(n, f)); }

inline void check_rational(const RationalFamily& fam) {
  if (fam.F.is_zero() || fam.G.is_zero()) throw invalid_input("rational family needs nonzero F and G");
  if (fam.F.nvars() != fam.n + 1 || fam.G.nvars() != fam.n + 1)
    throw invalid_input("rational family polynomials over wrong variable set");
}

inline void check_logarithmic(const LogarithmicFamily& fam) {
  if (fam.factors.size() < 2) throw invalid_input("logarithmic family needs at least two factors");
  if (fam.factors.size() != fam.residues.size())
    throw invalid_input("logarithmic family needs one residue per factor");
  Rational total(0);
  for (std::size_t i = 0; i < fam.factors.size(); ++i) {
    const auto& f = fam.factors[i];
    if (f.is_zero()) throw invalid_input("logarithmic factor is zero");
    if (f.nvars() != fam.n + 1) throw invalid_input("logarithmic factor over wrong variable set");
    total += fam.residues[i] * *f.degree();
  }
  if (total != 0)
    throw invalid_input("residue condition violated: sum of residue*degree is " + total.get_str());
}

inline Polynomial product_except(const std::vector<Polynomial>& fs, int nvars,
                                 std::initializer_list<std::size_t> skip) {
  Polynomial p = Polynomial::constant(nvars, Rational(1));
  for (std::size_t j = 0; j < fs.size(); ++j) {
    bool skipped = false;
    for (auto s : skip) skipped = skipped || s == j;
    if (!skipped) p = p * fs[j];
  }
  return p;
}

}  // namespace detail

inline ExtForm rational_form(const RationalFamily& fam) {
  detail::check_rational(fam);
  const int n = fam.n;
  ExtForm w = Rational(fam.b()) * (fam.G * detail::df(n, fam.F));
  w -= Rational(fam.a()) * (fam.F * detail::df(n, fam.G));
  return w;
}

inline ExtForm rational_form(const Polynomial& F, const Polynomial& G) {
  return rational_form(RationalFamily{F.nvars() - 1, F, G});
}

inline ExtForm logarithmic_form(const LogarithmicFamily& fam) {
  detail::check_logarithmic(fam);
  const int nv = fam.n + 1;
  ExtForm w(fam.n, 1);
  for (std::size_t i = 0; i < fam.factors.size(); ++i)
    w += fam.residues[i] * (detail::product_except(fam.factors, nv, {i}) * detail::df(fam.n, fam.factors[i]));
  return w;
}

inline ExtForm family_form(const Family& fam) {
  return std::visit(
      [](const auto& f) -> ExtForm {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, RationalFamily>)
          return rational_form(f);
        else
          return logarithmic_form(f);
      },
      fam);
}

inline int family_n(const Family& fam) {
  return std::visit([](const auto& f) { return f.n; }, fam);
}

/// Exact t-derivative at t = 0 of the family form along a parameter direction.
inline ExtForm curve_derivative(const RationalFamily& fam, const RationalDirection& dir) {
  detail::check_rational(fam);
  const int n = fam.n;
  const auto same_degree = [](const Polynomial& d, const Polynomial& base) {
    return d.is_zero() || d.degree() == base.degree();
  };
  if (!same_degree(dir.dF, fam.F) || !same_degree(dir.dG, fam.G))
    throw invalid_input("direction degree does not match the family");
  if ((!dir.dF.is_zero() && dir.dF.nvars() != n + 1) || (!dir.dG.is_zero() && dir.dG.nvars() != n + 1))
    throw invalid_input("direction over wrong variable set");
  const Polynomial dF = dir.dF.is_zero() ? Polynomial(n + 1) : dir.dF;
  const Polynomial dG = dir.dG.is_zero() ? Polynomial(n + 1) : dir.dG;
  const Rational a(fam.a()), b(fam.b());
  ExtForm w = b * (dG * detail::df(n, fam.F));
  w += b * (fam.G * detail::df(n, dF));
  w -= a * (dF * detail::df(n, fam.G));
  w -= a * (fam.F * detail::df(n, dG));
  return w;
}

inline ExtForm curve_derivative(const LogarithmicFamily& fam, const LogarithmicDirection& dir) {
  detail::check_logarithmic(fam);
  const std::size_t s = fam.factors.size();
  if (dir.dfactors.size() != s || dir.dresidues.size() != s)
    throw invalid_input("direction needs one entry per factor");
  Rational drift(0);
  for (std::size_t i = 0; i < s; ++i) {
    const auto& d = dir.dfactors[i];
    if (!d.is_zero() && (d.degree() != fam.factors[i].degree() || d.nvars() != fam.n + 1))
      throw invalid_input("direction degree does not match factor " + std::to_string(i + 1));
    drift += dir.dresidues[i] * *fam.factors[i].degree();
  }
  if (drift != 0) throw invalid_input("residue direction leaves the residue condition");
  const int n = fam.n, nv = n + 1;
  auto dfac = [&](std::size_t i) { return dir.dfactors[i].is_zero() ? Polynomial(nv) : dir.dfactors[i]; };
  ExtForm w(n, 1);
  for (std::size_t i = 0; i < s; ++i) {
    const ExtForm dfi = detail::df(n, fam.factors[i]);
    const Polynomial rest = detail::product_except(fam.factors, nv, {i});
    w += dir.dresidues[i] * (rest * dfi);
    for (std::size_t l = 0; l < s; ++l) {
      if (l == i || dfac(l).is_zero()) continue;
      w += fam.residues[i] * ((dfac(l) * detail::product_except(fam.factors, nv, {i, l})) * dfi);
    }
    if (!dfac(i).is_zero()) w += fam.residues[i] * (rest * detail::df(n, dfac(i)));
  }
  return w;
}

inline ExtForm curve_derivative(const Family& fam, const Direction& dir) {
  if (const auto* r = std::get_if<RationalFamily>(&fam)) {
    const auto* d = std::get_if<RationalDirection>(&dir);
    if (!d) throw invalid_input("rational family needs a rational direction");
    return curve_derivative(*r, *d);
  }
  const auto* d = std::get_if<LogarithmicDirection>(&dir);
  if (!d) throw invalid_input("logarithmic family needs a logarithmic direction");
  return curve_derivative(std::get<LogarithmicFamily>(fam), *d);
}

/// Basis of parameter directions: every coefficient of every polynomial, and
/// for logarithmic families a basis of residue moves preserving Σ λ_i d_i = 0.
inline std::vector<Direction> coordinate_directions(const Family& fam) {
  std::vector<Direction> out;
  if (const auto* r = std::get_if<RationalFamily>(&fam)) {
    const int nv = r->n + 1;
    for (const auto& m : monomials_of_degree(nv, r->a()))
      out.push_back(RationalDirection{Polynomial::monomial(m), Polynomial(nv)});
    for (const auto& m : monomials_of_degree(nv, r->b()))
      out.push_back(RationalDirection{Polynomial(nv), Polynomial::monomial(m)});
    return out;
  }
  const auto& lg = std::get<LogarithmicFamily>(fam);
  const int nv = lg.n + 1;
  const std::size_t s = lg.factors.size();
  auto zero_dir = [&] {
    return LogarithmicDirection{std::vector<Polynomial>(s, Polynomial(nv)), std::vector<Rational>(s, Rational(0))};
  };
  for (std::size_t i = 0; i < s; ++i)
    for (const auto& m : monomials_of_degree(nv, *lg.factors[i].degree())) {
      auto d = zero_dir();
      d.dfactors[i] = Polynomial::monomial(m);
      out.push_back(d);
    }
  // residue moves: δλ_i = d_last, δλ_last = −d_i
  const int dl = *lg.factors[s - 1].degree();
  for (std::size_t i = 0; i + 1 < s; ++i) {
    auto d = zero_dir();
    d.dresidues[i] = Rational(dl);
    d.dresidues[s - 1] = Rational(-*lg.factors[i].degree());
    out.push_back(d);
  }
  return out;
}

// --- random instances -------------------------------------------------------

struct RationalSpec {
  int a = 1, b = 1;
};
struct LogarithmicSpec {
  std::vector<int> degrees{1, 1, 1};
};

inline RationalFamily random_rational(int n, RationalSpec spec, std::uint64_t seed, int height = 5) {
  if (height < 1) throw invalid_input("height must be at least 1");
  Rng rng(seed);
  RationalFamily fam{n, random_nonzero_polynomial(rng, n + 1, spec.a, height),
                     random_nonzero_polynomial(rng, n + 1, spec.b, height)};
  return fam;
}

/// Residues are random integers for all but the last factor; the last one is
/// solved from the residue condition. Resampled until all residues are nonzero.
inline LogarithmicFamily random_logarithmic(int n, const LogarithmicSpec& spec, std::uint64_t seed,
                                            int height = 5) {
  if (height < 1) throw invalid_input("height must be at least 1");
  if (spec.degrees.size() < 2) throw invalid_input("logarithmic family needs at least two factors");
  Rng rng(seed);
  LogarithmicFamily fam;
  fam.n = n;
  for (int d : spec.degrees) fam.factors.push_back(random_nonzero_polynomial(rng, n + 1, d, height));
  for (;;) {
    fam.residues.clear();
    Rational acc(0);
    for (std::size_t i = 0; i + 1 < spec.degrees.size(); ++i) {
      Rational l(static_cast<long>(rng.uniform(-height, height)));
      acc += l * spec.degrees[i];
      fam.residues.push_back(l);
    }
    fam.residues.push_back(-acc / spec.degrees.back());
    bool ok = true;
    for (const auto& l : fam.residues) ok = ok && l != 0;
    if (ok) return fam;
  }
}

// --- linear substitutions ---------------------------------------------------

/// Square rational matrix, row-major.
using RationalMatrix = std::vector<std::vector<Rational>>;

inline Rational determinant(RationalMatrix m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size();
  RationalMatrix r(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline RationalMatrix random_invertible(Rng& rng, int size, int height = 3) {
  for (;;) {
    RationalMatrix m(size, std::vector<Rational>(size));
    for (auto& row : m)
      for (auto& v : row) v = Rational(static_cast<long>(rng.uniform(-height, height)));
    if (determinant(m) != 0) return m;
  }
}

/// Pullback under the substitution of the row vector x by x·M, i.e.
/// x_i ↦ Σ_j x_j M[j][i] and dx_i ↦ Σ_j M[j][i] dx_j. With this convention
/// linear_change(linear_change(ω, M), N) = linear_change(ω, N·M).
inline ExtForm linear_change(const ExtForm& w, const RationalMatrix& M) {
  const int nv = w.nvars();
  if (static_cast<int>(M.size()) != nv) throw invalid_input("substitution matrix has wrong size");
  for (const auto& row : M)
    if (static_cast<int>(row.size()) != nv) throw invalid_input("substitution matrix is not square");
  if (determinant(M) == 0) throw invalid_input("substitution matrix is singular");
  std::vector<Polynomial> images;
  std::vector<ExtForm> dimages;
  for (int i = 0; i < nv; ++i) {
    Polynomial p(nv);
    ExtForm dp(w.n(), 1);
    for (int j = 0; j < nv; ++j) {
      p += M[j][i] * Polynomial::variable(nv, j);
      dp += M[j][i] * ExtForm::differential(w.n(), j);
    }
    images.push_back(p);
    dimages.push_back(dp);
  }
  ExtForm out(w.n(), w.k());
  for (const auto& [t, p] : w.coeffs()) {
    ExtForm term = ExtForm::function(w.n(), p.substitute(images));
    for (int i : t.indices()) term = wedge(term, dimages[i]);
    out += term;
  }
  return out;
}

}  // namespace pfaff
