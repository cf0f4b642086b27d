#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfaff/ideal.hpp"

namespace pfaff {

/// Kernel of the linearized integrability equation. For systems the space
/// lives in the direct sum of descended (1, e_i) slots: block i occupies
/// ambient columns [offsets[i], offsets[i] + block_dims[i]).
struct TangentSlot {
  PfaffGenerators base;
  std::vector<int> twists;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> block_dims;
  Subspace space;
  std::size_t normalization_dim = 0;  // Σ dim of the saturation slots quotiented out
  std::string normalization = "raw minus saturation slot (1, e') of the source ideal";

  std::size_t raw_dim() const { return space.dim(); }
  std::size_t normalized_dim() const { return space.dim() - normalization_dim; }

  /// The tuple (η_1, ..., η_q) encoded by a vector of the direct sum.
  std::vector<ExtForm> forms(const SparseRow& v, Workspace& ws = default_workspace()) const {
    std::vector<ExtForm> out;
    for (std::size_t b = 0; b < twists.size(); ++b) {
      SparseRow local;
      for (const auto& [c, val] : v)
        if (c >= offsets[b] && c < offsets[b] + block_dims[b]) local.emplace_back(c - offsets[b], val);
      out.push_back(slot_basis(base.n(), 1, twists[b], ws)->form(local));
    }
    return out;
  }

  /// Coordinates of a tuple of 1-forms in the direct sum.
  SparseRow coords(const std::vector<ExtForm>& etas, Workspace& ws = default_workspace()) const {
    if (etas.size() != twists.size()) throw invalid_input("one form per block required");
    SparseRow out;
    for (std::size_t b = 0; b < etas.size(); ++b)
      for (const auto& [c, val] : slot_basis(base.n(), 1, twists[b], ws)->coords(etas[b]))
        out.emplace_back(c + offsets[b], val);
    return out;
  }

  bool contains(const std::vector<ExtForm>& etas, Workspace& ws = default_workspace()) const {
    return space.contains(coords(etas, ws));
  }
};

namespace detail {

inline void require_integrable(const PfaffGenerators& g) {
  if (!frobenius_check(g)) throw precondition_violated("generators are not integrable (Frobenius fails)");
}

/// Embeds a slot subspace as block `offset` of a larger coordinate space.
inline std::vector<SparseRow> shifted_rows(const Subspace& s, std::size_t offset) {
  std::vector<SparseRow> out;
  for (const auto& r : s.rows()) {
    SparseRow sh;
    for (const auto& [c, v] : r) sh.emplace_back(c + offset, v);
    out.push_back(std::move(sh));
  }
  return out;
}

}  // namespace detail

/// {η ∈ descended (1, e') : dη∧ω + dω∧η = 0}; default twist e' = weight of ω.
inline TangentSlot tangent_q1(const ExtForm& omega, std::optional<int> twist = std::nullopt,
                              Workspace& ws = default_workspace()) {
  PfaffGenerators g(omega.n(), {omega});
  detail::require_integrable(g);
  g.flags.frobenius_verified = true;
  const int e2 = twist ? *twist : g.weights()[0];
  const auto basis = slot_basis(g.n(), 1, e2, ws);
  TangentSlot out;
  out.base = g;
  out.twists = {e2};
  out.offsets = {0};
  out.block_dims = {basis->ambient_dim()};
  out.space = ws.memo("tangent-q1;" + slot_key({g.n(), 1, e2}) + ";" + g.canonical_key(), basis->ambient_dim(), [&] {
    const ExtForm domega = ext_d(omega);
    TermEncoder enc;
    std::vector<SparseRow> images;
    for (const auto& row : basis->descended.rows()) {
      const ExtForm eta = basis->form(row);
      images.push_back(enc.encode(wedge(ext_d(eta), omega) + wedge(domega, eta)));
    }
    return kernel_on(basis->descended, images);
  });
  const IdealSlot sat = saturation_slot(g, 1, e2, std::nullopt, ws);
  if (!out.space.contains(sat.space))
    throw oracle_mismatch("saturation slot is not contained in the tangent kernel");
  out.normalization_dim = sat.dim();
  return out;
}

/// Joint kernel over i of
///   dη_i∧ω + Σ_j (−1)^{q−j} dω_i∧ω̂_j∧η_j = 0   (j counted from 1),
/// with ω the top wedge and ω̂_j the ordered wedge omitting ω_j.
inline TangentSlot tangent_system(const PfaffGenerators& gens, Workspace& ws = default_workspace()) {
  detail::require_integrable(gens);
  const ExtForm omega = top_wedge(gens);
  if (omega.is_zero()) throw precondition_violated("generators are generically dependent (top wedge is zero)");
  const std::size_t q = gens.q();
  TangentSlot out;
  out.base = gens;
  out.base.flags.frobenius_verified = true;
  out.normalization = "raw minus the sum over i of saturation slots (1, e_i) of the ideal";
  std::size_t total = 0;
  std::vector<std::shared_ptr<const SlotBasis>> bases;
  for (std::size_t i = 0; i < q; ++i) {
    bases.push_back(slot_basis(gens.n(), 1, gens.weights()[i], ws));
    out.twists.push_back(gens.weights()[i]);
    out.offsets.push_back(total);
    out.block_dims.push_back(bases.back()->ambient_dim());
    total += bases.back()->ambient_dim();
  }
  out.space = ws.memo("tangent-system;" + gens.canonical_key(), total, [&] {
    std::vector<ExtForm> domega, hat;
    for (std::size_t i = 0; i < q; ++i) {
      domega.push_back(ext_d(gens[i]));
      std::vector<std::size_t> rest;
      for (std::size_t l = 0; l < q; ++l)
        if (l != i) rest.push_back(l);
      hat.push_back(subset_wedge(gens, rest));
    }
    // mixed[i][j] = (−1)^{q−j} dω_i∧ω̂_j with 1-based j
    std::vector<std::vector<ExtForm>> mixed(q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        ExtForm m = wedge(domega[i], hat[j]);
        if ((q - (j + 1)) & 1) m = -m;
        mixed[i].push_back(std::move(m));
      }
    std::vector<SparseRow> domain_rows;
    for (std::size_t j = 0; j < q; ++j) {
      auto rows = detail::shifted_rows(bases[j]->descended, out.offsets[j]);
      domain_rows.insert(domain_rows.end(), rows.begin(), rows.end());
    }
    const Subspace domain = Subspace::from_echelon(total, domain_rows);
    TermEncoder enc;
    std::vector<SparseRow> images;
    for (std::size_t j = 0; j < q; ++j)
      for (const auto& row : bases[j]->descended.rows()) {
        const ExtForm eta = bases[j]->form(row);
        const ExtForm deta = ext_d(eta);
        std::vector<std::pair<std::size_t, Rational>> img;
        for (std::size_t i = 0; i < q; ++i) {
          ExtForm eq = wedge(mixed[i][j], eta);
          if (i == j) eq += wedge(deta, omega);
          auto part = enc.encode(eq, static_cast<int>(i));
          img.insert(img.end(), part.begin(), part.end());
        }
        images.push_back(make_row(std::move(img)));
      }
    return kernel_on(domain, images);
  });
  for (std::size_t i = 0; i < q; ++i) {
    const IdealSlot sat = saturation_slot(gens, 1, gens.weights()[i], std::nullopt, ws);
    for (const auto& r : detail::shifted_rows(sat.space, out.offsets[i]))
      if (!out.space.contains(r))
        throw oracle_mismatch("saturation-valued tuple missing from the tangent system kernel");
    out.normalization_dim += sat.dim();
  }
  return out;
}

// --- sums of single-generator parts -------------------------------------------

namespace detail {

inline void require_single_generator_parts(const std::vector<PfaffGenerators>& parts, std::size_t j) {
  if (parts.empty()) throw invalid_input("no parts given");
  if (j >= parts.size()) throw invalid_input("part index out of range");
  for (const auto& p : parts)
    if (p.q() != 1) throw precondition_violated("each part must be generated by a single 1-form");
}

}  // namespace detail

/// Hom(I_j, I/I_j) at graded level: K_j ∩ I^{1,e_j}.
struct HomIntoIdeal {
  Subspace raw;                    // K_j ∩ I^{1,e_j}
  Subspace tangent;                // K_j
  Subspace part_saturation;        // Ī_j^{1,e_j}
  std::size_t modulo_saturation_dim = 0;
};

inline HomIntoIdeal hom_Ij_into_I(const std::vector<PfaffGenerators>& parts, std::size_t j,
                                  Workspace& ws = default_workspace()) {
  detail::require_single_generator_parts(parts, j);
  const ExtForm& wj = parts[j][0];
  const int ej = parts[j].weights()[0];
  HomIntoIdeal out;
  out.tangent = tangent_q1(wj, ej, ws).space;
  out.raw = intersect(out.tangent, sum_ideal_slot(parts, 1, ej, ws).space);
  out.part_saturation = saturation_slot(parts[j], 1, ej, std::nullopt, ws).space;
  out.modulo_saturation_dim = quotient_dim(out.raw, out.part_saturation);
  return out;
}

/// Hom(I_j, Ω/I) at graded level: solutions of dη∧ω + s_j dω_j∧ω̂_j∧η = 0
/// (ω the top wedge of the sum, s_j = (−1)^{q−j}), taken modulo Ī^{1,e_j}.
struct HomIntoQuotient {
  Subspace solutions;          // raw solution space H, contains Ī^{1,e_j}
  Subspace sum_saturation;     // Ī^{1,e_j}
  std::size_t quotient_dim = 0;
  bool saturated = true;       // I = Ī at the touched slots
  std::vector<std::string> flags;
};

inline int hom_sign(std::size_t q, std::size_t j) { return ((q - (j + 1)) & 1) ? -1 : 1; }

inline HomIntoQuotient hom_Ij_into_OmegaModI(const std::vector<PfaffGenerators>& parts, std::size_t j,
                                             Workspace& ws = default_workspace()) {
  detail::require_single_generator_parts(parts, j);
  const PfaffGenerators sum = concat(parts);
  const std::size_t q = sum.q();
  const int ej = sum.weights()[j];
  const ExtForm omega = top_wedge(sum);
  if (omega.is_zero()) throw precondition_violated("sum of parts is degenerate (top wedge is zero)");
  std::vector<std::size_t> rest;
  for (std::size_t l = 0; l < q; ++l)
    if (l != j) rest.push_back(l);
  ExtForm coupling = wedge(ext_d(sum[j]), subset_wedge(sum, rest));
  if (hom_sign(q, j) < 0) coupling = -coupling;

  const auto basis = slot_basis(sum.n(), 1, ej, ws);
  HomIntoQuotient out;
  out.solutions = ws.memo("hom-quotient;j=" + std::to_string(j) + ";" + sum.canonical_key(), basis->ambient_dim(), [&] {
    TermEncoder enc;
    std::vector<SparseRow> images;
    for (const auto& row : basis->descended.rows()) {
      const ExtForm eta = basis->form(row);
      images.push_back(enc.encode(wedge(ext_d(eta), omega) + wedge(coupling, eta)));
    }
    return kernel_on(basis->descended, images);
  });
  out.sum_saturation = saturation_slot(sum, 1, ej, std::nullopt, ws).space;
  out.quotient_dim = quotient_dim(out.solutions, out.sum_saturation);
  for (int k : {1, 2}) {
    if (k > sum.n()) continue;
    if (ideal_slot(sum, k, ej, ws).space != saturation_slot(sum, k, ej, std::nullopt, ws).space) {
      out.saturated = false;
      out.flags.push_back("surrogate: sum ideal not saturated at slot (" + std::to_string(k) + "," +
                          std::to_string(ej) + "); result is modulo saturation");
    }
  }
  return out;
}

/// Surjectivity of Hom(I_j, Ω/I_j) → Hom(I_j, Ω/I) at graded level.
struct HypothesisB {
  bool surjective = false;
  bool image_in_target = false;  // always expected; false signals an oracle mismatch
  std::size_t image_dim = 0;
  std::size_t target_dim = 0;
};

inline HypothesisB hypothesis_b_check(const std::vector<PfaffGenerators>& parts, std::size_t j,
                                      Workspace& ws = default_workspace()) {
  detail::require_single_generator_parts(parts, j);
  const HomIntoQuotient target = hom_Ij_into_OmegaModI(parts, j, ws);
  const Subspace kj = tangent_q1(parts[j][0], parts[j].weights()[0], ws).space;
  const Subspace image = sum(kj, target.sum_saturation);
  const Subspace full_target = sum(target.solutions, target.sum_saturation);
  HypothesisB out;
  out.image_dim = image.dim() - target.sum_saturation.dim();
  out.target_dim = full_target.dim() - target.sum_saturation.dim();
  out.image_in_target = full_target.contains(image);
  out.surjective = out.image_in_target && image.contains(full_target);
  return out;
}

struct FamilyDims {
  std::size_t tangent_raw = 0;        // dim K_j
  std::size_t part_saturation = 0;    // dim Ī_j^{1,e_j}
  std::size_t tangent_normalized = 0; // dim K_j − dim Ī_j^{1,e_j}
  std::size_t hom_into_ideal_raw = 0;
  std::size_t hom_into_ideal = 0;     // modulo Ī_j^{1,e_j}
  HypothesisB hypothesis_b;
  std::size_t image_kernel_dim = 0;   // dim K_j ∩ Ī^{1,e_j}
};

/// Sum-component dimension formula together with the direct tangent dimension
/// of the sum ideal under the same normalization.
struct ComponentDimReport {
  bool degenerate = false;
  std::vector<FamilyDims> families;
  std::optional<std::size_t> predicted;
  std::optional<std::size_t> direct;
  std::optional<std::size_t> direct_raw;
  std::optional<std::size_t> dmu_image_dim;
  bool consistent = false;
  bool dmu_matches_direct = false;
  bool all_hypothesis_b = false;
  std::vector<std::string> flags;
};

inline ComponentDimReport component_dimension(const std::vector<PfaffGenerators>& parts,
                                              Workspace& ws = default_workspace()) {
  detail::require_single_generator_parts(parts, 0);
  for (const auto& p : parts) detail::require_integrable(p);
  ComponentDimReport rep;
  const PfaffGenerators sum = concat(parts);
  if (top_wedge(sum).is_zero()) {
    rep.degenerate = true;
    rep.flags.push_back("degenerate: top wedge of the sum vanishes");
    return rep;
  }
  std::size_t sum_k = 0, sum_norm = 0, sum_hom_raw = 0, sum_hom = 0;
  rep.all_hypothesis_b = true;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    FamilyDims fd;
    const HomIntoIdeal h = hom_Ij_into_I(parts, j, ws);
    fd.tangent_raw = h.tangent.dim();
    fd.part_saturation = h.part_saturation.dim();
    fd.tangent_normalized = quotient_dim(h.tangent, h.part_saturation);
    fd.hom_into_ideal_raw = h.raw.dim();
    fd.hom_into_ideal = h.modulo_saturation_dim;
    fd.hypothesis_b = hypothesis_b_check(parts, j, ws);
    const HomIntoQuotient target = hom_Ij_into_OmegaModI(parts, j, ws);
    for (const auto& f : target.flags) rep.flags.push_back("part " + std::to_string(j + 1) + ": " + f);
    fd.image_kernel_dim = intersect(h.tangent, target.sum_saturation).dim();
    if (!fd.hypothesis_b.image_in_target)
      throw oracle_mismatch("image of K_" + std::to_string(j + 1) + " is not inside Hom(I_j, Omega/I)");
    rep.all_hypothesis_b = rep.all_hypothesis_b && fd.hypothesis_b.surjective;
    sum_k += fd.tangent_raw;
    sum_norm += fd.tangent_normalized;
    sum_hom_raw += fd.hom_into_ideal_raw;
    sum_hom += fd.hom_into_ideal;
    rep.families.push_back(fd);
  }
  rep.predicted = sum_norm - sum_hom;
  rep.dmu_image_dim = sum_k - sum_hom_raw;
  const TangentSlot direct = tangent_system(sum, ws);
  rep.direct_raw = direct.raw_dim();
  rep.direct = direct.normalized_dim();
  rep.consistent = *rep.predicted == *rep.direct;
  rep.dmu_matches_direct = *rep.dmu_image_dim == *rep.direct;
  rep.flags.push_back("Ext^1 obstruction spaces are not computed");
  return rep;
}

}  // namespace pfaff
