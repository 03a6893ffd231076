#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "rmlab/errors.hpp"
#include "rmlab/io.hpp"
#include "rmlab/params.hpp"

namespace rmlab {

/// Everything a CLI invocation needs; a JSON config file mirrors the flags.
/// Unset optionals take per-command defaults, and the resolved values are
/// written back into every output.
struct ExperimentConfig {
  std::string command;  // construct | norm | verify | classify | sweep
  std::string target;   // construction or probe name
  std::optional<double> p;
  std::optional<double> q;
  std::optional<double> alpha;
  std::string domain = "rn";
  int n = 1;
  std::optional<int> depth;
  std::optional<int> grid;
  std::vector<double> offsets{0.0, 1.0 / 3.0, 2.0 / 3.0};
  std::optional<int> K;
  std::vector<long> K_list;
  std::vector<long> L_list;
  std::optional<int> N;
  std::optional<int> parts;
  std::uint64_t seed = 0;
  std::optional<int> samples;
  std::optional<std::vector<double>> root_lower;
  std::optional<double> root_side;
  std::string function_path;
  std::string output_path;
  std::string certificate_csv;
  std::string trace_csv;

  /// Fills unset parameters with defaults.
  void default_params(double p0, double q0, double a0) {
    if (!p) p = p0;
    if (!q) q = q0;
    if (!alpha) alpha = a0;
  }

  ParamSpace params() const {
    if (!p || !q || !alpha) throw InputError("parameters p, q and alpha are required (--p, --q, --alpha)");
    return ParamSpace(*p, *q, *alpha);
  }

  DomainKind domain_kind() const {
    if (domain == "rn") return DomainKind::whole_space;
    if (domain == "cube") return DomainKind::cube;
    throw InputError("field 'domain' must be 'rn' or 'cube', got '" + domain + "'");
  }
};

namespace detail {

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

inline double number_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
  }
  if (!v.is_number()) throw InputError(std::string("config field '") + key + "' must be a number");
  return v.get<double>();
}

inline int int_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw InputError(std::string("config field '") + key + "' must be an integer");
  return v.get<int>();
}

template <class T>
std::vector<T> list_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw InputError(std::string("config field '") + key + "' must be an array");
  std::vector<T> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InputError(std::string("config field '") + key + "' must contain numbers");
    if constexpr (std::is_integral_v<T>) {
      const bool ok = std::is_unsigned_v<T> ? x.is_number_unsigned() : x.is_number_integer();
      if (!ok) throw InputError(std::string("config field '") + key + "' must contain integers in range");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

inline std::string string_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw InputError(std::string("config field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.target.empty()) j["target"] = c.target;
  if (c.p) j["p"] = scalar_to_json(*c.p);
  if (c.q) j["q"] = scalar_to_json(*c.q);
  detail::put(j, "alpha", c.alpha);
  j["domain"] = c.domain;
  j["n"] = c.n;
  detail::put(j, "depth", c.depth);
  detail::put(j, "grid", c.grid);
  j["offsets"] = c.offsets;
  detail::put(j, "K", c.K);
  if (!c.K_list.empty()) j["K_list"] = c.K_list;
  if (!c.L_list.empty()) j["L_list"] = c.L_list;
  detail::put(j, "N", c.N);
  detail::put(j, "parts", c.parts);
  j["seed"] = c.seed;
  detail::put(j, "samples", c.samples);
  if (c.root_lower) j["root"] = json{{"lower", *c.root_lower}, {"side", c.root_side.value_or(1.0)}};
  if (!c.function_path.empty()) j["function"] = c.function_path;
  return j;
}

/// Reads a config object; keys absent from the JSON keep their value in `base`
/// so that command-line flags can be layered on top of a file.
inline ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {}) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  static const std::vector<std::string> known{"command", "target", "probe", "construction", "p", "q", "alpha",
                                              "domain", "n", "depth", "grid", "offsets", "K", "K_list", "L_list",
                                              "N", "parts", "seed", "seeds", "samples", "root", "function",
                                              "params", "depths", "output", "certificate_csv", "trace_csv"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError("unknown config field '" + key + "'");
    }
  }
  ExperimentConfig c = std::move(base);
  try {
    if (j.contains("command")) c.command = detail::string_field(j, "command");
    for (const char* k : {"target", "probe", "construction"}) {
      if (j.contains(k)) c.target = detail::string_field(j, k);
    }
    const json* params = &j;
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw InputError("config field 'params' must be an object");
      params = &j["params"];
    }
    if (params->contains("p")) c.p = detail::number_field(*params, "p");
    if (params->contains("q")) c.q = detail::number_field(*params, "q");
    if (params->contains("alpha")) c.alpha = detail::number_field(*params, "alpha");
    if (j.contains("domain")) c.domain = detail::string_field(j, "domain");
    if (j.contains("n")) c.n = detail::int_field(j, "n");
    if (j.contains("depth")) c.depth = detail::int_field(j, "depth");
    if (j.contains("depths")) {
      auto d = detail::list_field<int>(j, "depths");
      if (d.empty()) throw InputError("config field 'depths' must be nonempty");
      c.depth = *std::max_element(d.begin(), d.end());
    }
    if (j.contains("grid")) c.grid = detail::int_field(j, "grid");
    if (j.contains("offsets")) c.offsets = detail::list_field<double>(j, "offsets");
    if (j.contains("K")) {
      if (j["K"].is_array()) {
        c.K_list = detail::list_field<long>(j, "K");
      } else {
        c.K = detail::int_field(j, "K");
      }
    }
    if (j.contains("K_list")) c.K_list = detail::list_field<long>(j, "K_list");
    if (j.contains("L_list")) c.L_list = detail::list_field<long>(j, "L_list");
    if (j.contains("N")) c.N = detail::int_field(j, "N");
    if (j.contains("parts")) c.parts = detail::int_field(j, "parts");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) {
        throw InputError("config field 'seed' must be a nonnegative integer");
      }
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("seeds")) {
      auto s = detail::list_field<std::uint64_t>(j, "seeds");
      if (s.empty()) throw InputError("config field 'seeds' must be nonempty");
      c.seed = s.front();
    }
    if (j.contains("samples")) c.samples = detail::int_field(j, "samples");
    if (j.contains("root")) {
      const auto& r = j["root"];
      if (!r.is_object() || !r.contains("lower") || !r.contains("side")) {
        throw InputError("config field 'root' must be {lower: [...], side}");
      }
      c.root_lower = detail::list_field<double>(r, "lower");
      c.root_side = detail::number_field(r, "side");
    }
    if (j.contains("function")) c.function_path = detail::string_field(j, "function");
    if (j.contains("output")) c.output_path = detail::string_field(j, "output");
    if (j.contains("certificate_csv")) c.certificate_csv = detail::string_field(j, "certificate_csv");
    if (j.contains("trace_csv")) c.trace_csv = detail::string_field(j, "trace_csv");
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  return c;
}

}  // namespace rmlab
