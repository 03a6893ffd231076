#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "rmlab/analysis.hpp"
#include "rmlab/constructions.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/estimate.hpp"
#include "rmlab/funcrep.hpp"
#include "rmlab/geometry.hpp"
#include "rmlab/params.hpp"
#include "rmlab/scalar.hpp"

namespace rmlab {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars. Doubles are written as JSON numbers in shortest round-trip form;
// quad values as decimal strings with enough digits to round-trip. Infinite
// values are written as the string "inf".

template <class Real>
json scalar_to_json(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
  } else {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<Real>::max_digits10) << x;
    return os.str();
  }
}

template <class Real>
Real scalar_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return Real(j.get<double>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return Real(std::numeric_limits<double>::infinity());
    if (s == "-inf") return Real(-std::numeric_limits<double>::infinity());
    try {
      if constexpr (std::is_same_v<Real, double>) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
      } else {
        return Real(s);
      }
    } catch (const std::exception&) {
    }
  }
  throw InputError("field '" + field + "' must be a number");
}

// ---------------------------------------------------------------------------
// Cubes and step functions: {dim, pieces: [{lower: [...], side, height}]}.

template <class Real>
json to_json(const BasicCube<Real>& c) {
  json lo = json::array();
  for (const auto& x : c.lower()) lo.push_back(scalar_to_json(x));
  return json{{"lower", lo}, {"side", scalar_to_json(c.side())}};
}

template <class Real>
BasicCube<Real> cube_from_json(const json& j, const std::string& where = "cube") {
  if (!j.is_object() || !j.contains("lower") || !j.contains("side")) {
    throw InputError("'" + where + "' must be an object with 'lower' and 'side'");
  }
  if (!j["lower"].is_array() || j["lower"].empty()) throw InputError("'" + where + ".lower' must be a nonempty array");
  Coords<Real> lo;
  for (const auto& v : j["lower"]) lo.push_back(scalar_from_json<Real>(v, where + ".lower"));
  try {
    return BasicCube<Real>(std::move(lo), scalar_from_json<Real>(j["side"], where + ".side"));
  } catch (const GeometryError& e) {
    throw InputError("'" + where + "': " + e.what());
  }
}

template <class Real>
json to_json(const BasicCubeFamily<Real>& family) {
  json arr = json::array();
  for (const auto& c : family) arr.push_back(to_json(c));
  return arr;
}

template <class Real>
json to_json(const BasicStepFunction<Real>& f) {
  json pieces = json::array();
  for (const auto& pc : f.pieces()) {
    json p = to_json(pc.support);
    p["height"] = pc.height;
    pieces.push_back(std::move(p));
  }
  return json{{"dim", f.dim()}, {"pieces", std::move(pieces)}};
}

template <class Real = double>
BasicStepFunction<Real> step_function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw InputError("step function JSON needs an integer 'dim'");
  }
  const int dim = j["dim"].get<int>();
  if (dim < 1) throw InputError("'dim' must be positive");
  std::vector<BasicPiece<Real>> pcs;
  if (j.contains("pieces")) {
    if (!j["pieces"].is_array()) throw InputError("'pieces' must be an array");
    std::size_t i = 0;
    for (const auto& p : j["pieces"]) {
      const std::string where = "pieces[" + std::to_string(i++) + "]";
      auto c = cube_from_json<Real>(p, where);
      if (c.dim() != dim) throw InputError("'" + where + "' has the wrong dimension");
      if (!p.contains("height")) throw InputError("'" + where + ".height' is missing");
      pcs.push_back({std::move(c), scalar_from_json<double>(p["height"], where + ".height")});
    }
  }
  try {
    return BasicStepFunction<Real>(dim, std::move(pcs));
  } catch (const GeometryError& e) {
    throw InputError(std::string("invalid step function: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Results.

inline json to_json(const ParamSpace& p) {
  json j{{"p", scalar_to_json(p.p())}, {"q", scalar_to_json(p.q())}, {"alpha", p.alpha()}};
  if (auto t = p.theta()) j["theta"] = *t;
  return j;
}

inline json to_json(const SeriesSum& s) {
  return json{{"value", s.value}, {"partial", s.partial}, {"tail", s.tail}, {"terms", s.terms}};
}

template <class Real>
json to_json(const BasicNormEstimate<Real>& e) {
  json trace = json::array();
  for (const auto& t : e.trace) trace.push_back(json{{"index", t.index}, {"value", t.value}});
  return json{{"value", e.infinite ? json("inf") : json(e.value)},
              {"power_sum", e.power_sum},
              {"kind", to_string(e.kind)},
              {"formula", e.formula},
              {"certificate", to_json(e.certificate)},
              {"trace", std::move(trace)}};
}

inline json to_json(const Classification& c) {
  json j{{"verdict", to_string(c.verdict)}, {"case", c.citation}};
  if (c.theta) j["theta"] = *c.theta;
  return j;
}

inline json to_json(const GrowthReport& g) {
  json samples = json::array();
  for (const auto& s : g.samples) samples.push_back(json{{"K", s.K}, {"value", s.value}});
  return json{{"fit_class", to_string(g.fit_class)},
              {"rate", g.rate},
              {"residual", g.residual},
              {"rss", {{"bounded", scalar_to_json(g.rss_bounded)},
                       {"logarithmic", g.rss_log},
                       {"linear", g.rss_linear}}},
              {"log_rate", g.log_rate},
              {"linear_rate", g.linear_rate},
              {"bounded_limit", g.bounded_limit},
              {"slope_exponent", scalar_to_json(g.slope_exponent)},
              {"thresholds", {{"bounded_slope_exponent", kBoundedSlopeExponent}, {"residual_ratio", kResidualRatio}}},
              {"samples", std::move(samples)}};
}

template <class Real>
json tree_metadata(const TreeConstruction<Real>& t) {
  auto vec = [](const auto& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_double(x));
    return a;
  };
  json counts = json::array();
  for (const auto& lv : t.levels) counts.push_back(lv.size());
  return json{{"construction", "tree"},
              {"n", t.n},
              {"depth", t.depth},
              {"params", to_json(t.params)},
              {"N0", t.N0},
              {"L0", to_double(t.L0)},
              {"lengths", vec(t.l)},
              {"distances_raw", vec(t.d_raw)},
              {"distances_modified", vec(t.d_hat)},
              {"radii", vec(t.D_hat)},
              {"gaps", vec(t.delta_hat)},
              {"heights", vec(t.h)},
              {"level_counts", counts},
              {"radius_tail_terms", t.radius_terms}};
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180).

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

/// Writes a header row and data rows with CRLF line ends.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      os << csv_field(r[i]);
    }
    os << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

inline void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  write_csv(f, header, rows);
}

/// One row per cube: index, side, lower corner coordinates.
template <class Real>
void write_family_csv(std::ostream& os, const BasicCubeFamily<Real>& family) {
  const int n = family.empty() ? 1 : family.front().dim();
  std::vector<std::string> header{"index", "side [length]"};
  for (int i = 0; i < n; ++i) header.push_back("lower_" + std::to_string(i) + " [length]");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < family.size(); ++k) {
    std::vector<std::string> r{std::to_string(k), csv_number(to_double(family[k].side()))};
    for (int i = 0; i < n; ++i) r.push_back(csv_number(to_double(family[k].lower(i))));
    rows.push_back(std::move(r));
  }
  write_csv(os, header, rows);
}

inline json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f << j.dump(2) << '\n';
}

}  // namespace rmlab
