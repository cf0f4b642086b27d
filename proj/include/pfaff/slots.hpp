#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pfaff/form.hpp"
#include "pfaff/linalg.hpp"

namespace pfaff {

/// Graded piece B^{k,e} = H^0(P^n, Ω^k(e)).
struct Slot {
  int n = 1;
  int k = 0;
  int e = 0;
  auto operator<=>(const Slot&) const = default;
};

/// One ambient basis element: monomial coefficient times dx_I.
struct BasisTerm {
  IndexTuple tuple;
  Monomial monomial;
  bool operator<(const BasisTerm& o) const {
    if (tuple < o.tuple) return true;
    if (o.tuple < tuple) return false;
    return MonomialOrder{}(monomial, o.monomial);
  }
  bool operator==(const BasisTerm&) const = default;
};

/// Ambient monomial k-forms of weight e and the descended (i_R-closed)
/// subspace, in ambient coordinates.
struct SlotBasis {
  Slot slot;
  std::vector<BasisTerm> ambient;
  std::map<BasisTerm, std::size_t> index;
  Subspace descended;

  std::size_t ambient_dim() const { return ambient.size(); }
  std::size_t dim() const { return descended.dim(); }

  /// Coordinates of a k-form of weight e (or zero). Throws on foreign terms.
  SparseRow coords(const ExtForm& f) const {
    if (f.n() != slot.n || f.k() != slot.k)
      throw invalid_input("form does not belong to slot (n,k) = (" + std::to_string(slot.n) + "," +
                          std::to_string(slot.k) + ")");
    if (auto w = f.weight(); w && *w != slot.e)
      throw invalid_input("form of weight " + std::to_string(*w) + " in slot of weight " +
                          std::to_string(slot.e));
    std::vector<std::pair<std::size_t, Rational>> entries;
    for (const auto& [t, p] : f.coeffs())
      for (const auto& [m, c] : p.terms()) entries.emplace_back(index.at(BasisTerm{t, m}), c);
    return make_row(std::move(entries));
  }

  ExtForm form(const SparseRow& v) const {
    ExtForm f(slot.n, slot.k);
    for (const auto& [i, c] : v) f.add_term(ambient.at(i).tuple, ambient.at(i).monomial, c);
    return f;
  }

  std::vector<ExtForm> descended_forms() const {
    std::vector<ExtForm> out;
    for (const auto& r : descended.rows()) out.push_back(form(r));
    return out;
  }
};

/// Enumerates the ambient basis of (n, k, e): tuples in lexicographic order,
/// then coefficient monomials of degree e - k in MonomialOrder.
inline std::vector<BasisTerm> ambient_terms(int n, int k, int e) {
  std::vector<BasisTerm> out;
  if (e - k < 0 || k < 0 || k > n + 1) return out;
  const auto monos = monomials_of_degree(n + 1, e - k);
  for (IndexTuple t : index_tuples(n, k))
    for (const auto& m : monos) out.push_back(BasisTerm{t, m});
  return out;
}

/// Assigns stable column ids to (block, tuple, monomial) keys so that forms of
/// any shape can be fed into kernel computations.
class TermEncoder {
 public:
  SparseRow encode(const ExtForm& f, int block = 0) {
    std::vector<std::pair<std::size_t, Rational>> entries;
    for (const auto& [t, p] : f.coeffs())
      for (const auto& [m, c] : p.terms()) {
        auto [it, inserted] = ids_.try_emplace(Key{block, BasisTerm{t, m}}, ids_.size());
        entries.emplace_back(it->second, c);
      }
    return make_row(std::move(entries));
  }
  std::size_t size() const { return ids_.size(); }

 private:
  struct Key {
    int block;
    BasisTerm term;
    bool operator<(const Key& o) const {
      if (block != o.block) return block < o.block;
      return term < o.term;
    }
  };
  std::map<Key, std::size_t> ids_;
};

/// Persistent backing for echelon matrices, keyed by canonical input text.
class MatrixStore {
 public:
  virtual ~MatrixStore() = default;
  /// Returns nullopt on a miss or on any entry that fails validation.
  virtual std::optional<Subspace> load(const std::string& key, std::size_t ambient_dim) = 0;
  virtual void save(const std::string& key, const Subspace& value) = 0;
};

/// Shared computation context: slot-basis cache plus optional persistent
/// store. Safe for concurrent use; concurrent fills of one key are idempotent.
class Workspace {
 public:
  Workspace() = default;
  explicit Workspace(std::shared_ptr<MatrixStore> store) : store_(std::move(store)) {}
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  void attach_store(std::shared_ptr<MatrixStore> store) {
    std::lock_guard lock(mutex_);
    store_ = std::move(store);
  }

  std::shared_ptr<const SlotBasis> slot_basis(const Slot& s);

  /// Memoizes a subspace computation under a canonical key.
  Subspace memo(const std::string& key, std::size_t ambient_dim,
                const std::function<Subspace()>& compute) {
    std::shared_ptr<MatrixStore> store;
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
      store = store_;
    }
    std::optional<Subspace> value;
    if (store) value = store->load(key, ambient_dim);
    if (!value) {
      value = compute();
      if (store) store->save(key, *value);
    }
    std::lock_guard lock(mutex_);
    return memo_.try_emplace(key, std::move(*value)).first->second;
  }

  void clear() {
    std::lock_guard lock(mutex_);
    slots_.clear();
    memo_.clear();
  }

 private:
  std::mutex mutex_;
  std::shared_ptr<MatrixStore> store_;
  std::map<Slot, std::shared_ptr<const SlotBasis>> slots_;
  std::map<std::string, Subspace> memo_;
};

inline Workspace& default_workspace() {
  static Workspace ws;
  return ws;
}

inline std::string slot_key(const Slot& s) {
  return "n=" + std::to_string(s.n) + ";k=" + std::to_string(s.k) + ";e=" + std::to_string(s.e);
}

inline std::shared_ptr<const SlotBasis> Workspace::slot_basis(const Slot& s) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = slots_.find(s); it != slots_.end()) return it->second;
  }
  auto basis = std::make_shared<SlotBasis>();
  basis->slot = s;
  basis->ambient = ambient_terms(s.n, s.k, s.e);
  for (std::size_t i = 0; i < basis->ambient.size(); ++i) basis->index.emplace(basis->ambient[i], i);
  const std::size_t dim = basis->ambient.size();
  basis->descended = memo("descended;" + slot_key(s), dim, [&] {
    if (s.k == 0) return Subspace::full(dim);
    // kernel of i_R on the ambient basis, equations indexed by target terms
    TermEncoder enc;
    std::vector<SparseRow> images;
    images.reserve(dim);
    for (const auto& term : basis->ambient) {
      ExtForm f(s.n, s.k);
      f.add_term(term.tuple, term.monomial, Rational(1));
      images.push_back(enc.encode(contract_radial(f)));
    }
    return kernel_on(Subspace::full(dim), images);
  });
  std::lock_guard lock(mutex_);
  return slots_.try_emplace(s, std::move(basis)).first->second;
}

/// Basis of the slot (n, k, e). Requires n >= 1 and 0 <= k <= n.
inline std::shared_ptr<const SlotBasis> slot_basis(const Slot& s,
                                                   Workspace& ws = default_workspace()) {
  if (s.n < 1) throw invalid_input("slot needs n >= 1");
  if (s.k < 0 || s.k > s.n) throw invalid_input("slot needs 0 <= k <= n");
  return ws.slot_basis(s);
}

inline std::shared_ptr<const SlotBasis> slot_basis(int n, int k, int e,
                                                   Workspace& ws = default_workspace()) {
  return slot_basis(Slot{n, k, e}, ws);
}

}  // namespace pfaff
