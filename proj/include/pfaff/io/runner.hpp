#pragma once

#include <chrono>
#include "json.hpp"
#include <sstream>
#include <string>

#include "pfaff/io/cache.hpp"
#include "pfaff/io/document.hpp"
#include "pfaff/pfaff.hpp"
#include "pfaff/selftest.hpp"

namespace pfaff::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { exit_ok = 0, exit_invalid_input = 1, exit_precondition = 2, exit_oracle = 3 };

struct RunOptions {
  bool bases = false;
  bool repro = false;
  std::uint64_t seed = 0;
};

struct RunResult {
  json report;
  int exit_code = exit_ok;
  std::string error;  // message of the first failing task
};

namespace detail {

inline json sparse_json(const SparseRow& row) {
  json out = json::array();
  for (const auto& [i, v] : row) out.push_back(json::array({i, v.get_str()}));
  return out;
}

inline json basis_json(const Subspace& s, const SlotBasis& basis) {
  json out = json::array();
  for (const auto& row : s.rows()) out.push_back({{"form", basis.form(row).to_string()}, {"coords", sparse_json(row)}});
  return out;
}

inline json ambient_json(const SlotBasis& basis) {
  json out = json::array();
  for (const auto& t : basis.ambient) {
    ExtForm f(basis.slot.n, basis.slot.k);
    f.add_term(t.tuple, t.monomial, Rational(1));
    out.push_back(f.to_string());
  }
  return out;
}

inline json strings(const std::vector<std::string>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

}  // namespace detail

/// Executes the tasks of a parsed document and assembles the JSON report.
class Runner {
 public:
  Runner(const InputDocument& doc, std::string source, RunOptions opts, Workspace& ws = default_workspace())
      : doc_(doc), source_(std::move(source)), opts_(opts), ws_(ws) {
    for (const auto& d : doc_.declarations) decls_.emplace(d.name, &d.value);
  }

  RunResult run() {
    RunResult res;
    const auto start = std::chrono::steady_clock::now();
    json tasks = json::array();
    json timings = json::array();
    for (const auto& t : doc_.tasks) {
      const auto t0 = std::chrono::steady_clock::now();
      json entry{{"name", t.command}, {"params", params_json(t)}};
      std::vector<std::string> flags;
      int code = exit_ok;
      std::string message;
      try {
        entry["result"] = execute(t, flags);
      } catch (const precondition_violated& e) {
        code = exit_precondition, message = e.what();
      } catch (const oracle_mismatch& e) {
        code = exit_oracle, message = e.what();
      } catch (const invalid_input& e) {
        code = exit_invalid_input, message = e.what();
      } catch (const std::invalid_argument& e) {
        code = exit_invalid_input, message = e.what();
      }
      entry["flags"] = detail::strings(flags);
      if (code != exit_ok) {
        entry["error"] = {{"exit_code", code}, {"message", message}};
        if (res.exit_code == exit_ok) {
          res.exit_code = code;
          res.error = t.command + ": " + message;
        }
      }
      tasks.push_back(std::move(entry));
      timings.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      if (code != exit_ok) break;
    }
    res.report = json{{"tool", "pfaff"},
                      {"version", kVersion},
                      {"input_digest", "sha256:" + sha256_hex(source_)},
                      {"seed", opts_.seed},
                      {"tasks", std::move(tasks)}};
    if (!opts_.repro) {
      res.report["timing_ms"] = {
          {"total", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()},
          {"tasks", std::move(timings)}};
    }
    return res;
  }

 private:
  // --- argument helpers --------------------------------------------------------

  static json params_json(const Task& t) {
    json args = json::array();
    for (const auto& a : t.args) {
      if (const auto* w = std::get_if<std::string>(&a))
        args.push_back(*w);
      else
        args.push_back(detail::strings(std::get<NameList>(a)));
    }
    json opts = json::object();
    for (const auto& [k, v] : t.options) opts[k] = v;
    return {{"args", args}, {"options", opts}};
  }

  static void arity(const Task& t, std::size_t lo, std::size_t hi, const std::string& usage) {
    if (t.args.size() < lo || t.args.size() > hi) throw invalid_input("usage: " + t.command + " " + usage);
  }

  static const std::string& word(const Task& t, std::size_t i) {
    const auto* w = std::get_if<std::string>(&t.args.at(i));
    if (!w) throw invalid_input(t.command + ": argument " + std::to_string(i + 1) + " must be a name or integer");
    return *w;
  }

  static long long to_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw invalid_input(what + " must be an integer, got '" + s + "'");
    return v;
  }

  static int int_arg(const Task& t, std::size_t i, const std::string& what) {
    return static_cast<int>(to_int(word(t, i), what));
  }

  static std::optional<long long> int_option(const Task& t, const std::string& key) {
    auto v = t.option(key);
    if (!v) return std::nullopt;
    return to_int(*v, "--" + key);
  }

  static void known_options(const Task& t, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : t.options) {
      bool ok = false;
      for (const char* key : keys) ok = ok || k == key;
      if (!ok) throw invalid_input(t.command + ": unknown option --" + k);
    }
  }

  const DeclValue& lookup(const std::string& name) const {
    auto it = decls_.find(name);
    if (it == decls_.end()) throw invalid_input("undeclared name '" + name + "'");
    return *it->second;
  }

  ExtForm form_of(const std::string& name) const {
    const DeclValue& v = lookup(name);
    if (const auto* f = std::get_if<ExtForm>(&v)) return *f;
    if (const auto* r = std::get_if<RationalFamily>(&v)) return rational_form(*r);
    if (const auto* l = std::get_if<LogarithmicFamily>(&v)) return logarithmic_form(*l);
    throw invalid_input("'" + name + "' is a list, expected a form");
  }

  PfaffGenerators gens_of(const std::string& name) const {
    const DeclValue& v = lookup(name);
    std::vector<ExtForm> gens;
    if (const auto* list = std::get_if<NameList>(&v)) {
      for (const auto& item : *list) gens.push_back(form_of(item));
    } else {
      gens.push_back(form_of(name));
    }
    return PfaffGenerators(doc_.n, std::move(gens));
  }

  std::vector<PfaffGenerators> parts_of(const Task& t, std::size_t i) const {
    NameList names;
    if (const auto* list = std::get_if<NameList>(&t.args.at(i))) {
      names = *list;
    } else {
      const DeclValue& v = lookup(std::get<std::string>(t.args.at(i)));
      const auto* list2 = std::get_if<NameList>(&v);
      if (!list2) throw invalid_input(t.command + ": expected a list of parts");
      names = *list2;
    }
    if (names.empty()) throw invalid_input(t.command + ": empty list of parts");
    std::vector<PfaffGenerators> parts;
    for (const auto& n : names) parts.push_back(gens_of(n));
    return parts;
  }

  std::size_t part_index(const Task& t, std::size_t i, std::size_t count) const {
    const int j = int_arg(t, i, "part index");
    if (j < 1 || static_cast<std::size_t>(j) > count)
      throw invalid_input("part index " + std::to_string(j) + " outside 1.." + std::to_string(count));
    return static_cast<std::size_t>(j - 1);
  }

  void need_n() const {
    if (doc_.n < 1) throw invalid_input("document declares no 'n'");
  }

  // --- tasks -------------------------------------------------------------------

  json execute(const Task& t, std::vector<std::string>& flags) {
    const std::string& c = t.command;
    if (c == "selftest") return run_selftest_task(t);
    if (c == "basis") return basis(t);
    need_n();
    if (c == "frobenius") {
      known_options(t, {});
      arity(t, 1, 1, "NAME");
      PfaffGenerators g = gens_of(word(t, 0));
      return frobenius_check(g);
    }
    if (c == "wedge-top") return wedge_top(t);
    if (c == "saturate") return saturate(t, flags);
    if (c == "tangent") return tangent(t);
    if (c == "tangent-system") return tangent_sys(t);
    if (c == "homij") return homij(t, flags);
    if (c == "hypb") return hypb(t, flags);
    if (c == "sumdim") return sumdim(t, flags);
    if (c == "relations") return relations(t);
    if (c == "probe-sing") return probe(t);
    throw invalid_input("unknown command '" + c + "'");
  }

  json basis(const Task& t) {
    known_options(t, {});
    arity(t, 2, 3, "[n] k e");
    const bool with_n = t.args.size() == 3;
    if (!with_n) need_n();
    const int n = with_n ? int_arg(t, 0, "n") : doc_.n;
    const int k = int_arg(t, with_n ? 1 : 0, "k"), e = int_arg(t, with_n ? 2 : 1, "e");
    const auto b = slot_basis(n, k, e, ws_);
    json out{{"n", n}, {"k", k}, {"e", e}, {"ambient_dim", b->ambient_dim()}, {"dim", b->dim()}};
    if (opts_.bases) {
      out["ambient_basis"] = detail::ambient_json(*b);
      out["basis"] = detail::basis_json(b->descended, *b);
    }
    return out;
  }

  json wedge_top(const Task& t) {
    known_options(t, {});
    arity(t, 1, 1, "NAME");
    const PfaffGenerators g = gens_of(word(t, 0));
    const SingularSchemeGens s = singular_scheme(g);
    json polys = json::array();
    for (const auto& p : s.polys) polys.push_back(p.to_string());
    return {{"q", g.q()},
            {"top_wedge", top_wedge(g).to_string()},
            {"degenerate", s.degenerate},
            {"singular_scheme", polys}};
  }

  json saturate(const Task& t, std::vector<std::string>& flags) {
    known_options(t, {"rank"});
    arity(t, 3, 3, "NAME k e [--rank r]");
    const PfaffGenerators g = gens_of(word(t, 0));
    const int k = int_arg(t, 1, "k"), e = int_arg(t, 2, "e");
    std::optional<std::size_t> rank;
    if (auto r = int_option(t, "rank")) {
      if (*r < 0) throw invalid_input("--rank must be nonnegative");
      rank = static_cast<std::size_t>(*r);
    }
    const IdealSlot ideal = ideal_slot(g, k, e, ws_);
    const IdealSlot sat = saturation_slot(g, k, e, rank, ws_);
    if (!sat.space.contains(ideal.space)) throw oracle_mismatch("saturation does not contain the ideal");
    const ProbeReport probe = codim2_probe(singular_scheme(g), 20, opts_.seed);
    if (!probe.codim2_evidence())
      flags.push_back("singular set may have a codimension-1 component; saturation can exceed the ideal");
    const auto b = slot_basis(g.n(), k, e, ws_);
    json out{{"k", k},
             {"e", e},
             {"rank", rank ? *rank : generic_rank(g)},
             {"slot_dim", b->dim()},
             {"ideal_dim", ideal.dim()},
             {"saturation_dim", sat.dim()},
             {"saturated", ideal.dim() == sat.dim()}};
    if (opts_.bases) {
      out["ideal_basis"] = detail::basis_json(ideal.space, *b);
      out["saturation_basis"] = detail::basis_json(sat.space, *b);
    }
    return out;
  }

  json tangent(const Task& t) {
    known_options(t, {"twist"});
    arity(t, 1, 1, "NAME [--twist e]");
    const ExtForm w = form_of(word(t, 0));
    std::optional<int> twist;
    if (auto v = int_option(t, "twist")) twist = static_cast<int>(*v);
    const TangentSlot ts = tangent_q1(w, twist, ws_);
    if (ts.twists[0] == *w.weight() && !ts.contains({w}, ws_))
      throw oracle_mismatch("the form is not in its own tangent space");
    json out{{"weight", *w.weight()},
             {"twist", ts.twists[0]},
             {"raw_dim", ts.raw_dim()},
             {"normalization_dim", ts.normalization_dim},
             {"dim", ts.normalized_dim()},
             {"normalization", ts.normalization}};
    if (opts_.bases) out["basis"] = detail::basis_json(ts.space, *slot_basis(w.n(), 1, ts.twists[0], ws_));
    return out;
  }

  json tangent_sys(const Task& t) {
    known_options(t, {});
    arity(t, 1, 1, "NAME");
    const PfaffGenerators g = gens_of(word(t, 0));
    const TangentSlot ts = tangent_system(g, ws_);
    json out{{"q", g.q()},
             {"weights", g.weights()},
             {"raw_dim", ts.raw_dim()},
             {"normalization_dim", ts.normalization_dim},
             {"dim", ts.normalized_dim()},
             {"normalization", ts.normalization}};
    if (opts_.bases) {
      json sols = json::array();
      for (const auto& row : ts.space.rows()) {
        json blocks = json::array();
        for (const auto& f : ts.forms(row, ws_)) blocks.push_back(f.to_string());
        sols.push_back({{"forms", blocks}, {"coords", detail::sparse_json(row)}});
      }
      out["basis"] = sols;
    }
    return out;
  }

  json homij(const Task& t, std::vector<std::string>& flags) {
    known_options(t, {});
    arity(t, 2, 2, "PARTS j");
    const auto parts = parts_of(t, 0);
    const std::size_t j = part_index(t, 1, parts.size());
    const HomIntoIdeal h = hom_Ij_into_I(parts, j, ws_);
    const HomIntoQuotient q = hom_Ij_into_OmegaModI(parts, j, ws_);
    for (const auto& f : q.flags) flags.push_back(f);
    json out{{"j", j + 1},
             {"into_ideal_raw", h.raw.dim()},
             {"into_ideal", h.modulo_saturation_dim},
             {"part_saturation_dim", h.part_saturation.dim()},
             {"into_quotient", q.quotient_dim}};
    if (opts_.bases) {
      const auto b = slot_basis(parts[j].n(), 1, parts[j].weights()[0], ws_);
      out["into_ideal_basis"] = detail::basis_json(h.raw, *b);
      out["into_quotient_basis"] = detail::basis_json(q.solutions, *b);
    }
    return out;
  }

  json hypb(const Task& t, std::vector<std::string>& flags) {
    known_options(t, {});
    arity(t, 2, 2, "PARTS j");
    const auto parts = parts_of(t, 0);
    const std::size_t j = part_index(t, 1, parts.size());
    const HypothesisB hb = hypothesis_b_check(parts, j, ws_);
    if (!hb.image_in_target) throw oracle_mismatch("tangent image is not inside Hom(I_j, Omega/I)");
    for (const auto& f : hom_Ij_into_OmegaModI(parts, j, ws_).flags) flags.push_back(f);
    return {{"j", j + 1}, {"surjective", hb.surjective}, {"image_dim", hb.image_dim}, {"target_dim", hb.target_dim}};
  }

  json sumdim(const Task& t, std::vector<std::string>& flags) {
    known_options(t, {});
    arity(t, 1, 1, "PARTS");
    const auto parts = parts_of(t, 0);
    const ComponentDimReport rep = component_dimension(parts, ws_);
    for (const auto& f : rep.flags) flags.push_back(f);
    json fams = json::array();
    for (const auto& f : rep.families)
      fams.push_back({{"tangent_raw", f.tangent_raw},
                      {"part_saturation", f.part_saturation},
                      {"tangent", f.tangent_normalized},
                      {"hom_into_ideal_raw", f.hom_into_ideal_raw},
                      {"hom_into_ideal", f.hom_into_ideal},
                      {"hypothesis_b", f.hypothesis_b.surjective},
                      {"image_dim", f.hypothesis_b.image_dim},
                      {"target_dim", f.hypothesis_b.target_dim}});
    json out{{"degenerate", rep.degenerate}, {"families", fams}};
    auto opt = [](const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); };
    out["predicted"] = opt(rep.predicted);
    out["direct"] = opt(rep.direct);
    out["direct_raw"] = opt(rep.direct_raw);
    out["dmu_image_dim"] = opt(rep.dmu_image_dim);
    out["consistent"] = rep.consistent;
    out["hypothesis_b"] = rep.all_hypothesis_b;
    out["dmu_matches_direct"] = rep.dmu_matches_direct;
    return out;
  }

  json relations(const Task& t) {
    known_options(t, {});
    arity(t, 3, 3, "PARTS k e");
    const auto parts = parts_of(t, 0);
    const int k = int_arg(t, 1, "k"), e = int_arg(t, 2, "e");
    const RelationsSlot r = relations_slot(parts, k, e, ws_);
    std::size_t total = 0;
    for (auto d : r.part_dims) total += d;
    if (r.dim() != total - r.sum_dim) throw oracle_mismatch("relations rank identity fails");
    return {{"k", k}, {"e", e}, {"dim", r.dim()}, {"part_dims", r.part_dims}, {"sum_dim", r.sum_dim}};
  }

  json probe(const Task& t) {
    known_options(t, {"trials", "seed"});
    arity(t, 1, 1, "NAME [--trials T] [--seed S]");
    const long long trials = int_option(t, "trials").value_or(20);
    if (trials < 1 || trials > 100000) throw invalid_input("--trials must be between 1 and 100000");
    const auto seed_opt = int_option(t, "seed");
    const std::uint64_t seed = seed_opt ? static_cast<std::uint64_t>(*seed_opt) : opts_.seed;
    const std::string& name = word(t, 0);
    std::vector<Polynomial> polys;
    bool all_functions = true;
    std::vector<ExtForm> forms;
    if (const auto* list = std::get_if<NameList>(&lookup(name))) {
      for (const auto& item : *list) forms.push_back(form_of(item));
    } else {
      forms.push_back(form_of(name));
    }
    for (const auto& f : forms) all_functions = all_functions && f.k() == 0;
    ProbeReport rep;
    if (all_functions) {
      for (const auto& f : forms)
        if (!f.is_zero()) polys.push_back(f.coefficient(IndexTuple()));
      if (polys.empty()) throw invalid_input("probe-sing: all polynomials vanish");
      rep = codim2_probe(polys, static_cast<int>(trials), seed);
    } else {
      rep = codim2_probe(singular_scheme(PfaffGenerators(doc_.n, forms)), static_cast<int>(trials), seed);
    }
    return {{"trials", rep.trials}, {"hits", rep.hits}, {"seed", seed}, {"codim2_evidence", rep.codim2_evidence()}};
  }

  json run_selftest_task(const Task& t) {
    known_options(t, {"seed"});
    arity(t, 0, 0, "[--seed S]");
    const auto s = int_option(t, "seed");
    const std::uint64_t seed = s ? static_cast<std::uint64_t>(*s) : opts_.seed;
    const auto checks = run_selftest(seed, ws_);
    json list = json::array();
    bool ok = true;
    std::string first;
    for (const auto& c : checks) {
      json entry{{"check", c.name}, {"cases", c.cases}, {"passed", c.passed()}};
      if (!c.passed()) {
        entry["failures"] = c.failures;
        entry["first_failure"] = c.first_failure;
        if (ok) first = c.name + ": " + c.first_failure;
        ok = false;
      }
      list.push_back(entry);
    }
    if (!ok) throw oracle_mismatch("selftest failed: " + first);
    return {{"seed", seed}, {"passed", ok}, {"checks", list}};
  }

  const InputDocument& doc_;
  std::string source_;
  RunOptions opts_;
  Workspace& ws_;
  std::map<std::string, const DeclValue*> decls_;
};

/// Flattened "path  value" lines for terminal output.
inline std::string render_table(const json& report) {
  std::ostringstream os;
  std::function<void(const json&, const std::string&)> walk = [&](const json& v, const std::string& path) {
    if (v.is_object()) {
      for (auto it = v.begin(); it != v.end(); ++it) walk(it.value(), path.empty() ? it.key() : path + "." + it.key());
    } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
      for (std::size_t i = 0; i < v.size(); ++i) walk(v[i], path + "[" + std::to_string(i) + "]");
    } else {
      os << (path.empty() ? "result" : path) << "  " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  };
  os << "pfaff " << report.value("version", "") << "  " << report.value("input_digest", "") << '\n';
  for (const auto& t : report["tasks"]) {
    os << "\n[" << t["name"].get<std::string>();
    for (const auto& a : t["params"]["args"]) os << ' ' << (a.is_string() ? a.get<std::string>() : a.dump());
    for (auto it = t["params"]["options"].begin(); it != t["params"]["options"].end(); ++it)
      os << " --" << it.key() << ' ' << it.value().get<std::string>();
    os << "]\n";
    if (t.contains("result")) walk(t["result"], "");
    for (const auto& f : t["flags"]) os << "flag  " << f.get<std::string>() << '\n';
    if (t.contains("error")) os << "error  " << t["error"]["message"].get<std::string>() << '\n';
  }
  return os.str();
}

}  // namespace pfaff::io
