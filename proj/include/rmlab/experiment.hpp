#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rmlab/analysis.hpp"
#include "rmlab/config.hpp"
#include "rmlab/constructions.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/io.hpp"
#include "rmlab/norms.hpp"
#include "rmlab/probes.hpp"

namespace rmlab {

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitProbeFailed = 1;
inline constexpr int kExitConfig = 2;

namespace detail {

inline std::string sibling_path(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

inline void emit_json(const ExperimentConfig& cfg, const json& j, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(cfg.output_path, j);
  }
}

/// Step function JSON for a tree: doubles when they keep the cubes disjoint,
/// decimal strings of the quad coordinates otherwise.
inline json tree_function_json(const TreeConstruction<quad>& t, bool* exact_double) {
  const auto fq = tree_function(t);
  // Doubles only when every corner and side survives the round trip.
  *exact_double = std::all_of(fq.pieces().begin(), fq.pieces().end(), [](const auto& pc) {
    const auto& c = pc.support;
    if (quad(static_cast<double>(c.side())) != c.side()) return false;
    return std::all_of(c.lower().begin(), c.lower().end(),
                       [](const quad& x) { return quad(static_cast<double>(x)) == x; });
  });
  if (!*exact_double) return to_json(fq);
  std::vector<Piece> pcs;
  pcs.reserve(fq.size());
  for (const auto& pc : fq.pieces()) pcs.push_back({pc.support.convert<double>(), pc.height});
  return to_json(StepFunction(t.n, std::move(pcs)));
}

inline int run_construct(ExperimentConfig& cfg, std::ostream& out) {
  json fn;
  json meta;
  bool has_function = true;
  if (cfg.target == "tree") {
    cfg.default_params(2.0, 1.0, -0.25);
    if (!cfg.depth) cfg.depth = 8;
    if (*cfg.depth < 0 || *cfg.depth > 20) throw InputError("config field 'depth' must lie in [0, 20] for tree");
    const auto t = build_tree<quad>(cfg.n, *cfg.depth, cfg.params());
    bool dbl = true;
    fn = tree_function_json(t, &dbl);
    meta = tree_metadata(t);
    meta["coordinates"] = dbl ? "double" : "quad-string";
    meta["bound_Lone"] = bound_Lone(t.params);
    meta["bound_Lmore"] = bound_Lmore(t).value;
    meta["lq_closed_form"] = tree_lq_closed_form(t.depth, t.params, t.params.q());
  } else if (cfg.target == "sparse") {
    if (cfg.L_list.empty()) cfg.L_list = {100};
    const long L = cfg.L_list.front();
    if (L < 1 || L > kSparseMaxL) throw InputError("config field 'L_list' must hold an L in [1, 1022]");
    const auto f = sparse_function(static_cast<int>(L), cfg.n);
    fn = to_json(f);
    std::vector<std::size_t> cuts;
    for (long k = 10; k < L; k *= 10) cuts.push_back(static_cast<std::size_t>(k));
    json trunc = json::array();
    meta = json{{"construction", "sparse"}, {"L", L}, {"n", cfg.n}};
    if (cfg.p && cfg.q && cfg.alpha) {
      const auto ps = cfg.params();
      if (auto th = ps.theta()) {
        const auto leb = lebesgue_norm(f, Domain::whole_space(cfg.n), *th, cuts);
        for (const auto& tp : leb.trace) trunc.push_back(json{{"L", tp.index}, {"theta_norm", tp.value}});
        meta["theta"] = *th;
        meta["truncations"] = trunc;
      }
    }
  } else if (cfg.target == "shell") {
    cfg.default_params(1.0, 2.0, 0.25);
    if (!cfg.K) cfg.K = 200;
    if (!cfg.parts) cfg.parts = 1;
    const auto ps = cfg.params();
    const auto sc = shell_thresholds(ps.p(), ps.alpha(), *cfg.K);
    fn = to_json(StepFunction(1, {{Cube::interval(sc.e_lo, sc.e_hi), 1.0}}));
    json shells = json::array();
    for (int k = 1; k <= *cfg.K; ++k) {
      const auto fam = shell_partition_1d(sc.t[static_cast<std::size_t>(k - 1)], sc.t[static_cast<std::size_t>(k)],
                                          *cfg.parts);
      shells.push_back(json{{"k", k},
                            {"t", sc.t[static_cast<std::size_t>(k)]},
                            {"mass", sc.shell_mass(k)},
                            {"target_mass", sc.target_mass(k)},
                            {"cubes", to_json(fam)}});
    }
    meta = json{{"construction", "shell"}, {"Z", sc.Z}, {"Z_terms", sc.Z_terms}, {"exponent", sc.exponent},
                {"E", json{{"lower", sc.e_lo}, {"upper", sc.e_hi}}}, {"shells", shells}};
  } else if (cfg.target == "power") {
    cfg.default_params(2.0, 1.0, -0.25);
    if (!cfg.N) cfg.N = 2;
    const auto sp = power_split(*cfg.N, cfg.n, cfg.params());
    has_function = false;
    json ring = json::array();
    for (int i = 1; i <= 3; ++i) ring.push_back(json{{"i", i}, {"cubes", to_json(ring_subdivision(i, *cfg.N, cfg.n))}});
    meta = json{{"construction", "power"},
                {"exponent", sp.s},
                {"n", sp.n},
                {"N", sp.N},
                {"ring_exponent", sp.ring_exponent},
                {"orthant_sphere_measure", sp.orthant_measure},
                {"C0", sp.C0},
                {"rings", ring}};
  } else {
    throw InputError("unknown construction '" + cfg.target + "' (expected tree, sparse, shell or power)");
  }
  meta["config"] = to_json(cfg);
  if (cfg.output_path.empty()) {
    json j{{"config", to_json(cfg)}, {"metadata", meta}};
    if (has_function) j["function"] = fn;
    out << j.dump(2) << '\n';
  } else if (has_function) {
    write_json_file(cfg.output_path, fn);
    write_json_file(sibling_path(cfg.output_path, ".meta.json"), meta);
  } else {
    write_json_file(cfg.output_path, meta);
  }
  return kExitOk;
}

template <class Real>
int run_norm_typed(ExperimentConfig& cfg, const json& fj, std::ostream& out) {
  const auto f = step_function_from_json<Real>(fj);
  if (!cfg.depth) cfg.depth = 10;
  const auto params = cfg.params();
  std::optional<BasicCube<Real>> root;
  if (cfg.root_lower) {
    Coords<Real> lo;
    for (double x : *cfg.root_lower) lo.push_back(Real(x));
    root = BasicCube<Real>(std::move(lo), Real(cfg.root_side.value_or(1.0)));
  }
  const auto kind = cfg.domain_kind();
  if (kind == DomainKind::cube && !root) {
    root = f.support_bound();
    if (!root) throw InputError("config field 'root' is required for a cube domain with a zero function");
  }
  const auto domain = kind == DomainKind::cube ? BasicDomain<Real>::cube(*root) : BasicDomain<Real>::whole_space(f.dim());
  DyadicOptions opt;
  opt.offsets = cfg.offsets;
  const auto est = rm_norm(f, domain, params, *cfg.depth, opt, root);
  json j{{"config", to_json(cfg)}};
  const json body = to_json(est);
  for (const auto& [k, v] : body.items()) j[k] = v;
  emit_json(cfg, j, out);
  if (!cfg.certificate_csv.empty()) {
    std::ofstream fcsv(cfg.certificate_csv, std::ios::binary);
    if (!fcsv) throw InputError("cannot open '" + cfg.certificate_csv + "' for writing");
    write_family_csv(fcsv, est.certificate);
  }
  if (!cfg.trace_csv.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : est.trace) rows.push_back({std::to_string(t.index), csv_number(t.value)});
    write_csv_file(cfg.trace_csv, {"depth [levels]", "norm [1]"}, rows);
  }
  return kExitOk;
}

inline bool uses_string_coordinates(const json& fj) {
  if (!fj.contains("pieces") || !fj["pieces"].is_array()) return false;
  for (const auto& p : fj["pieces"]) {
    if (p.contains("side") && p["side"].is_string()) return true;
  }
  return false;
}

inline int run_norm(ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.function_path.empty()) throw InputError("config field 'function' (--function) is required for norm");
  const json fj = read_json_file(cfg.function_path);
  if (uses_string_coordinates(fj)) return run_norm_typed<quad>(cfg, fj, out);
  return run_norm_typed<double>(cfg, fj, out);
}

inline int run_verify(ExperimentConfig& cfg, std::ostream& out) {
  const auto& reg = probe_registry();
  std::vector<std::string> names;
  if (cfg.target.empty() || cfg.target == "all") {
    for (const auto& [name, _] : reg) names.push_back(name);
  } else {
    if (!reg.count(cfg.target)) {
      std::string known;
      for (const auto& [name, _] : reg) known += (known.empty() ? "" : ", ") + name;
      throw InputError("unknown probe '" + cfg.target + "' (expected one of: " + known + ")");
    }
    names.push_back(cfg.target);
  }
  json results = json::array();
  bool all = true;
  const ExperimentConfig base = cfg;
  for (const auto& name : names) {
    ExperimentConfig local = base;
    auto o = reg.at(name)(local);
    o.name = name;
    all = all && o.pass;
    json r{{"probe", name}, {"pass", o.pass}, {"config", to_json(local)}};
    for (auto& [k, v] : o.verdict.items()) r[k] = v;
    std::string csv_path;
    if (!cfg.trace_csv.empty() && names.size() == 1) {
      csv_path = cfg.trace_csv;
    } else if (!cfg.output_path.empty()) {
      csv_path = sibling_path(cfg.output_path, "." + name + ".csv");
    }
    if (!csv_path.empty()) {
      write_csv_file(csv_path, o.csv_header, o.csv_rows);
      r["trace_csv"] = csv_path;
    }
    results.push_back(std::move(r));
    if (names.size() == 1) cfg = local;
  }
  json j{{"config", to_json(cfg)}, {"pass", all}, {"probes", results}};
  emit_json(cfg, j, out);
  return all ? kExitOk : kExitProbeFailed;
}

inline int run_classify(ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.p || !cfg.q || !cfg.alpha) throw InputError("parameters p, q and alpha are required (--p, --q, --alpha)");
  if (!(*cfg.p >= 1.0) || !(*cfg.q >= 1.0)) throw RegimeError("classify: p and q must lie in [1, inf]");
  const auto c = classify(*cfg.p, *cfg.q, *cfg.alpha, cfg.domain_kind());
  json j{{"config", to_json(cfg)}};
  const json body = to_json(c);
  for (const auto& [k, v] : body.items()) j[k] = v;
  emit_json(cfg, j, out);
  return kExitOk;
}

inline int run_sweep(ExperimentConfig& cfg, std::ostream& out) {
  const auto rows = probes::classification_rows();
  if (cfg.output_path.empty()) {
    write_csv(out, probes::classification_header(), rows);
  } else {
    write_csv_file(cfg.output_path, probes::classification_header(), rows);
  }
  return kExitOk;
}

}  // namespace detail

/// Executes one command. Returns 0 when every probe assertion holds, 1 when a
/// probe fails, 2 on regime or configuration errors (message written to err).
inline int run(ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.n < 1) throw InputError("config field 'n' must be positive");
    if (cfg.domain != "rn" && cfg.domain != "cube") {
      throw InputError("config field 'domain' must be 'rn' or 'cube', got '" + cfg.domain + "'");
    }
    for (double o : cfg.offsets) {
      if (!(o >= 0.0 && o < 1.0)) throw InputError("config field 'offsets' entries must lie in [0, 1)");
    }
    if (cfg.command == "construct") return detail::run_construct(cfg, out);
    if (cfg.command == "norm") return detail::run_norm(cfg, out);
    if (cfg.command == "verify") return detail::run_verify(cfg, out);
    if (cfg.command == "classify") return detail::run_classify(cfg, out);
    if (cfg.command == "sweep") return detail::run_sweep(cfg, out);
    throw InputError("config field 'command' must be construct, norm, verify, classify or sweep; got '" +
                     cfg.command + "'");
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const QuadratureError& e) {
    err << "quadrature error: " << e.what() << '\n';
    return kExitProbeFailed;
  }
}

}  // namespace rmlab
