#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfaff/random.hpp"
#include "pfaff/slots.hpp"
#include "pfaff/twisted.hpp"

namespace pfaff {

/// Generators ω_1..ω_q of a Pfaff ideal I = <ω_1, ..., ω_q>: nonzero
/// descended twisted 1-forms.
class PfaffGenerators {
 public:
  struct Flags {
    std::optional<bool> frobenius_verified;
    std::optional<std::vector<bool>> primitive;
  };

  PfaffGenerators() = default;
  PfaffGenerators(int n, std::vector<ExtForm> gens) : n_(n), gens_(std::move(gens)) {
    for (const auto& g : gens_) {
      if (g.n() != n_) throw invalid_input("generator over a different ambient space");
      if (g.k() != 1) throw invalid_input("Pfaff generators must be 1-forms");
      if (g.is_zero()) throw invalid_input("Pfaff generator is zero");
      if (!check_descent(g)) throw invalid_input("Pfaff generator does not descend: " + g.to_string());
      weights_.push_back(*g.weight());
    }
  }

  int n() const { return n_; }
  std::size_t q() const { return gens_.size(); }
  const std::vector<ExtForm>& gens() const { return gens_; }
  const ExtForm& operator[](std::size_t i) const { return gens_.at(i); }
  const std::vector<int>& weights() const { return weights_; }
  int min_weight() const {
    int m = weights_.empty() ? 0 : weights_[0];
    for (int w : weights_) m = std::min(m, w);
    return m;
  }

  Flags flags;

  /// Canonical text used for cache keys.
  std::string canonical_key() const {
    std::string s = "n=" + std::to_string(n_) + ";gens=[";
    for (std::size_t i = 0; i < gens_.size(); ++i) s += (i ? "," : "") + gens_[i].to_string();
    return s + "]";
  }

 private:
  int n_ = 1;
  std::vector<ExtForm> gens_;
  std::vector<int> weights_;
};

/// Union of generator lists, in order.
inline PfaffGenerators concat(const std::vector<PfaffGenerators>& parts) {
  if (parts.empty()) throw invalid_input("empty list of parts");
  std::vector<ExtForm> all;
  for (const auto& p : parts) {
    if (p.n() != parts[0].n()) throw invalid_input("parts over different ambient spaces");
    all.insert(all.end(), p.gens().begin(), p.gens().end());
  }
  return PfaffGenerators(parts[0].n(), std::move(all));
}

enum class IdealKind { ideal, saturation, relations };

inline const char* to_string(IdealKind k) {
  switch (k) {
    case IdealKind::ideal: return "ideal";
    case IdealKind::saturation: return "saturation";
    case IdealKind::relations: return "relations";
  }
  return "?";
}

/// A graded piece of an ideal, as a subspace of the slot's ambient coordinates.
struct IdealSlot {
  Slot slot;
  Subspace space;
  IdealKind kind = IdealKind::ideal;
  std::size_t dim() const { return space.dim(); }
};

/// Ordered wedge of the generators selected by `subset` (indices into gens).
inline ExtForm subset_wedge(const PfaffGenerators& g, const std::vector<std::size_t>& subset) {
  std::vector<ExtForm> fs;
  for (auto i : subset) fs.push_back(g[i]);
  return wedge_all(g.n(), fs);
}

/// ω = ω_1 ∧ ... ∧ ω_q. Zero signals generically dependent generators.
inline ExtForm top_wedge(const PfaffGenerators& g) { return wedge_all(g.n(), g.gens()); }

/// Coefficients of the top wedge; their zero scheme is S(I) in the generic-rank case.
struct SingularSchemeGens {
  std::vector<Polynomial> polys;
  std::size_t q = 0;
  bool degenerate = false;  // top wedge vanished
};

inline SingularSchemeGens singular_scheme(const PfaffGenerators& g) {
  SingularSchemeGens s;
  s.q = g.q();
  const ExtForm w = top_wedge(g);
  s.degenerate = w.is_zero();
  for (const auto& [t, p] : w.coeffs()) s.polys.push_back(p);
  return s;
}

/// ω ∧ dω_i = 0 for every i.
inline bool frobenius_check(const PfaffGenerators& g) {
  const ExtForm w = top_wedge(g);
  for (const auto& gi : g.gens())
    if (!wedge(w, ext_d(gi)).is_zero()) return false;
  return true;
}

inline bool frobenius_check(PfaffGenerators& g) {
  const bool ok = frobenius_check(static_cast<const PfaffGenerators&>(g));
  g.flags.frobenius_verified = ok;
  return ok;
}

// --- probing restricted to random lines -----------------------------------

namespace detail {

using Univariate = std::vector<Rational>;  // coefficient of t^i at index i

inline void trim(Univariate& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Univariate poly_mod(Univariate a, const Univariate& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

inline Univariate poly_gcd(Univariate a, Univariate b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Univariate r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// f(s·P + t·Q) as a binary form in (s, t).
inline Polynomial restrict_to_line(const Polynomial& f, const std::vector<Rational>& P,
                                   const std::vector<Rational>& Q) {
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < P.size(); ++i)
    images.push_back(P[i] * Polynomial::variable(2, 0) + Q[i] * Polynomial::variable(2, 1));
  return f.substitute(images);
}

/// Do the binary forms share a root in P^1 (or all vanish)?
inline bool common_root_on_line(const std::vector<Polynomial>& binary) {
  bool all_zero = true, all_at_infinity = true;
  Univariate g;
  for (const auto& b : binary) {
    if (b.is_zero()) continue;
    all_zero = false;
    const int d = *b.degree();
    Univariate u(d + 1, Rational(0));
    for (const auto& [m, c] : b.terms()) u[m.exps[1]] = c;
    if (u[d] != 0) all_at_infinity = false;  // s = 0 is not a root
    g = poly_gcd(g, u);
  }
  if (all_zero) return true;
  if (all_at_infinity) return true;
  return g.size() >= 2;
}

inline bool proportional(const std::vector<Rational>& P, const std::vector<Rational>& Q) {
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j)
      if (P[i] * Q[j] - P[j] * Q[i] != 0) return false;
  return true;
}

inline std::pair<std::vector<Rational>, std::vector<Rational>> random_line(Rng& rng, int nvars,
                                                                           int height) {
  for (;;) {
    std::vector<Rational> P(nvars), Q(nvars);
    for (auto& v : P) v = Rational(static_cast<long>(rng.uniform(-height, height)));
    for (auto& v : Q) v = Rational(static_cast<long>(rng.uniform(-height, height)));
    if (!proportional(P, Q)) return {P, Q};  // coincident points: resample
  }
}

}  // namespace detail

struct ProbeReport {
  bool empty = false;  // no generators: whole space
  int trials = 0;
  int hits = 0;
  bool codim2_evidence() const { return !empty && hits == 0; }
};

/// Restricts every generator to `trials` random lines and counts the lines on
/// which they share a root. Zero hits is evidence (not proof) of codim >= 2.
inline ProbeReport codim2_probe(const std::vector<Polynomial>& polys, int trials, std::uint64_t seed,
                                int height = 100) {
  if (trials < 1) throw invalid_input("probe needs at least one trial");
  ProbeReport r;
  if (polys.empty()) {
    r.empty = true;
    return r;
  }
  const int nvars = polys[0].nvars();
  Rng rng(seed);
  r.trials = trials;
  for (int t = 0; t < trials; ++t) {
    auto [P, Q] = detail::random_line(rng, nvars, height);
    std::vector<Polynomial> restricted;
    for (const auto& f : polys) restricted.push_back(detail::restrict_to_line(f, P, Q));
    if (detail::common_root_on_line(restricted)) ++r.hits;
  }
  return r;
}

inline ProbeReport codim2_probe(const SingularSchemeGens& s, int trials, std::uint64_t seed) {
  return codim2_probe(s.polys, trials, seed);
}

/// Whether the coefficients of ω have constant gcd. A line on which the
/// coefficients have no common root certifies a constant gcd exactly (a
/// common factor would restrict to a common root on every line). When every
/// one of `max_trials` lines shows a common root the gcd is declared non-constant.
inline bool is_primitive(const ExtForm& w, int max_trials = 48, std::uint64_t seed = 0x9e3779b97f4a7c15ULL) {
  std::vector<Polynomial> coeffs;
  for (const auto& [t, p] : w.coeffs()) {
    if (p.degree() == 0) return true;
    coeffs.push_back(p);
  }
  if (coeffs.empty()) return false;
  Rng rng(seed);
  for (int i = 0; i < max_trials; ++i) {
    auto [P, Q] = detail::random_line(rng, w.nvars(), 100);
    std::vector<Polynomial> restricted;
    for (const auto& f : coeffs) restricted.push_back(detail::restrict_to_line(f, P, Q));
    if (!detail::common_root_on_line(restricted)) return true;
  }
  return false;
}

inline std::vector<bool> primitivity_check(const PfaffGenerators& g) {
  std::vector<bool> out;
  for (const auto& w : g.gens()) out.push_back(is_primitive(w));
  return out;
}

inline std::vector<bool> primitivity_check(PfaffGenerators& g) {
  auto out = primitivity_check(static_cast<const PfaffGenerators&>(g));
  g.flags.primitive = out;
  return out;
}

// --- graded pieces ----------------------------------------------------------

/// Span, in the ambient coordinates of slot (k, e), of m∧ω_i and m'∧dω_i over
/// all monomial (k−1)-forms m and (k−2)-forms m' of the right weight.
inline Subspace ambient_ideal_span(const PfaffGenerators& g, int k, int e,
                                   Workspace& ws = default_workspace()) {
  const auto basis = slot_basis(g.n(), k, e, ws);
  return ws.memo("ideal-ambient;" + slot_key({g.n(), k, e}) + ";" + g.canonical_key(),
                 basis->ambient_dim(), [&] {
                   Subspace span(basis->ambient_dim());
                   for (std::size_t i = 0; i < g.q(); ++i) {
                     const ExtForm dgi = ext_d(g[i]);
                     const int budget = e - g.weights()[i];
                     auto multiply = [&](int deg, const ExtForm& factor) {
                       if (deg < 0) return;
                       for (const auto& term : ambient_terms(g.n(), deg, budget)) {
                         ExtForm m(g.n(), deg);
                         m.add_term(term.tuple, term.monomial, Rational(1));
                         span.insert(basis->coords(wedge(m, factor)));
                       }
                     };
                     multiply(k - 1, g[i]);
                     multiply(k - 2, dgi);
                   }
                   return span;
                 });
}

/// Graded piece I^{k,e}: the ambient span intersected with the descended slot.
inline IdealSlot ideal_slot(const PfaffGenerators& g, int k, int e, Workspace& ws = default_workspace()) {
  const auto basis = slot_basis(g.n(), k, e, ws);
  IdealSlot out{Slot{g.n(), k, e}, Subspace(basis->ambient_dim()), IdealKind::ideal};
  if (k == 0 || g.q() == 0) return out;
  out.space = ws.memo("ideal;" + slot_key(out.slot) + ";" + g.canonical_key(), basis->ambient_dim(), [&] {
    return intersect(ambient_ideal_span(g, k, e, ws), basis->descended);
  });
  return out;
}

/// Graded piece of Σ_j I_j: the ideal of the union of the generator lists.
inline IdealSlot sum_ideal_slot(const std::vector<PfaffGenerators>& parts, int k, int e,
                                Workspace& ws = default_workspace()) {
  return ideal_slot(concat(parts), k, e, ws);
}

/// All r-subsets of {0..q-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t q, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == r) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < q; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Largest r such that some r-subset of generators has a nonzero wedge.
inline std::size_t generic_rank(const PfaffGenerators& g) {
  for (std::size_t r = g.q(); r > 0; --r)
    for (const auto& s : subsets(g.q(), r))
      if (!subset_wedge(g, s).is_zero()) return r;
  return 0;
}

/// Saturation piece Ī^{k,e}: descended θ with θ∧ω_{i_1}∧...∧ω_{i_r} = 0 for
/// every r-subset with nonzero wedge, r the generic rank (computed when absent).
inline IdealSlot saturation_slot(const PfaffGenerators& g, int k, int e,
                                 std::optional<std::size_t> rank = std::nullopt,
                                 Workspace& ws = default_workspace()) {
  const auto basis = slot_basis(g.n(), k, e, ws);
  IdealSlot out{Slot{g.n(), k, e}, Subspace(basis->ambient_dim()), IdealKind::saturation};
  if (g.q() == 0) return out;
  const std::size_t r = rank ? *rank : generic_rank(g);
  if (r == 0 || r > g.q()) throw invalid_input("declared generic rank out of range");
  std::vector<ExtForm> wedges;
  for (const auto& s : subsets(g.q(), r))
    if (auto w = subset_wedge(g, s); !w.is_zero()) wedges.push_back(std::move(w));
  if (wedges.empty())
    throw invalid_input("every " + std::to_string(r) + "-subset wedge vanishes: rank misdeclared");
  out.space = ws.memo("saturation;" + slot_key(out.slot) + ";r=" + std::to_string(r) + ";" + g.canonical_key(),
                      basis->ambient_dim(), [&] {
                        TermEncoder enc;
                        std::vector<SparseRow> images;
                        for (const auto& row : basis->descended.rows()) {
                          const ExtForm theta = basis->form(row);
                          std::vector<std::pair<std::size_t, Rational>> img;
                          for (std::size_t b = 0; b < wedges.size(); ++b) {
                            auto part = enc.encode(wedge(theta, wedges[b]), static_cast<int>(b));
                            img.insert(img.end(), part.begin(), part.end());
                          }
                          images.push_back(make_row(std::move(img)));
                        }
                        return kernel_on(basis->descended, images);
                      });
  return out;
}

/// R = ker(⊕_j I_j^{k,e} → B^{k,e}), in concatenated coordinates (block j
/// holds the j-th summand in slot coordinates).
struct RelationsSlot {
  Slot slot;
  Subspace space;
  std::vector<std::size_t> part_dims;
  std::size_t sum_dim = 0;
  std::size_t dim() const { return space.dim(); }
};

inline RelationsSlot relations_slot(const std::vector<PfaffGenerators>& parts, int k, int e,
                                    Workspace& ws = default_workspace()) {
  if (parts.empty()) throw invalid_input("relations need at least one part");
  const auto basis = slot_basis(parts[0].n(), k, e, ws);
  const std::size_t N = basis->ambient_dim();
  RelationsSlot out;
  out.slot = Slot{parts[0].n(), k, e};
  std::vector<SparseRow> domain_rows, images;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const IdealSlot ij = ideal_slot(parts[j], k, e, ws);
    out.part_dims.push_back(ij.dim());
    for (const auto& row : ij.space.rows()) {
      SparseRow shifted;
      for (const auto& [c, v] : row) shifted.emplace_back(c + j * N, v);
      domain_rows.push_back(std::move(shifted));
      images.push_back(row);
    }
  }
  const Subspace domain = Subspace::from_echelon(N * parts.size(), std::move(domain_rows));
  out.space = kernel_on(domain, images);
  out.sum_dim = sum_ideal_slot(parts, k, e, ws).dim();
  return out;
}

}  // namespace pfaff
