#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rmlab/analysis.hpp"
#include "rmlab/config.hpp"
#include "rmlab/constructions.hpp"
#include "rmlab/io.hpp"
#include "rmlab/norms.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/random.hpp"
#include "rmlab/scalar.hpp"

namespace rmlab {

/// Verdict of one named probe plus a plotting trace.
struct ProbeOutcome {
  std::string name;
  bool pass = false;
  json verdict = json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

/// Independent generator for sample i of a seeded run.
inline Rng sample_rng(std::uint64_t seed, std::size_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return Rng(seq);
}

inline double relative_error(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline Cube unit_cube(int n) { return Cube(Coords<double>(static_cast<std::size_t>(n), 0.0), 1.0); }

/// DP depth at which every tree cube is a union of dyadic cells of the root:
/// ceil(log2(L0 / l_depth)) + 2.
template <class Real>
int resolving_depth(const TreeConstruction<Real>& t) {
  const double ratio = to_double(t.L0) / to_double(t.l.back());
  return static_cast<int>(std::ceil(std::log2(ratio))) + 2;
}

/// The (p, q, alpha) grid used by classification sweeps: for each (p, q)
/// pair, alpha values on both sides of 0 and of 1/p - 1/q, the two
/// boundaries themselves, and a value at -1/q.
inline std::vector<ParamSpace> classification_grid() {
  const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, 4.0, kInf};
  const std::vector<double> qs{1.0, 2.0, 3.0, 6.0, kInf};
  std::vector<ParamSpace> out;
  for (double p : ps) {
    for (double q : qs) {
      const double d = (std::isinf(p) ? 0.0 : 1.0 / p) - (std::isinf(q) ? 0.0 : 1.0 / q);
      std::vector<double> alphas{d - 0.2, d, 0.0, 0.15};
      if (d < 0.0) alphas.push_back(d / 2.0);
      if (d > 0.0) alphas.push_back(d / 2.0);
      if (!std::isinf(q)) alphas.push_back(-1.0 / q);
      std::sort(alphas.begin(), alphas.end());
      alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
      for (double a : alphas) out.emplace_back(p, q, a);
    }
  }
  return out;
}

namespace probes {

inline ProbeOutcome riesz_identity(ExperimentConfig& cfg) {
  if (!cfg.p) cfg.p = 2.0;
  if (!cfg.grid) cfg.grid = 6;
  if (!cfg.samples) cfg.samples = 20;
  const double p = *cfg.p;
  const int level = *cfg.grid;
  if (!(p > 1.0) || std::isinf(p)) throw RegimeError("riesz-identity: p must lie in (1, inf)");
  if (level < 0 || level > 16) throw InputError("riesz-identity: 'grid' (dyadic level) must lie in [0, 16]");
  if (*cfg.samples < 1) throw InputError("config field 'samples' must be positive");
  const Cube Q0 = unit_cube(1);
  const auto domain = Domain::cube(Q0);
  struct Row {
    double riesz, lp, err;
    std::size_t pieces;
  };
  auto rows = parallel_map(static_cast<std::size_t>(*cfg.samples), [&](std::size_t i) {
    auto rng = sample_rng(cfg.seed, i);
    const auto f = random_dyadic_step_function(rng, Q0, level);
    DyadicOptions opt;
    opt.offsets = {0.0};
    opt.parallel = false;
    const double r = riesz_norm(f, Q0, p, level, opt).value;
    const double l = lebesgue_norm(f, domain, p).value;
    return Row{r, l, relative_error(r, l), f.size()};
  });
  ProbeOutcome o;
  o.csv_header = {"sample", "pieces [count]", "riesz_norm [1]", "lp_norm [1]", "relative_error [1]"};
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, rows[i].err);
    o.csv_rows.push_back({std::to_string(i), std::to_string(rows[i].pieces), csv_number(rows[i].riesz),
                          csv_number(rows[i].lp), csv_number(rows[i].err)});
  }
  o.pass = worst <= 1e-9;
  o.verdict = json{{"max_relative_error", worst}, {"tolerance", 1e-9}, {"samples", *cfg.samples}};
  return o;
}

inline ProbeOutcome q23_identity(ExperimentConfig& cfg) {
  cfg.default_params(2.0, 1.0, -0.6);
  if (!cfg.grid) cfg.grid = 10;
  if (!cfg.samples) cfg.samples = 20;
  const auto params = cfg.params();
  if (!params.in_identity_regime()) {
    throw RegimeError("q23-identity: requires q <= p and alpha in (-1/q, 1/p - 1/q]; got " + params.describe());
  }
  const int k = *cfg.grid;
  if (k < 1 || k > kBruteForceMaxCells) {
    throw InputError("config field 'grid' must lie in [1, " + std::to_string(kBruteForceMaxCells) + "]");
  }
  const Cube Q0 = unit_cube(1);
  struct Row {
    double brute, singleton, err;
    std::size_t cert;
  };
  auto rows = parallel_map(static_cast<std::size_t>(*cfg.samples), [&](std::size_t i) {
    auto rng = sample_rng(cfg.seed, i);
    const auto f = random_grid_step_function(rng, Q0, k);
    const auto b = rm_norm_bruteforce_1d(f, Q0, k, params);
    const double e = params.cube_exponent();
    const double single = std::pow(to_double(Q0.volume()), e) * std::pow(lq_norm_on_cube(f, Q0, params.q()), params.p());
    return Row{b.power_sum, single, relative_error(b.power_sum, single), b.certificate.size()};
  });
  ProbeOutcome o;
  o.csv_header = {"sample", "bruteforce_score [1]", "singleton_score [1]", "relative_error [1]",
                  "certificate_cubes [count]"};
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, rows[i].err);
    o.csv_rows.push_back({std::to_string(i), csv_number(rows[i].brute), csv_number(rows[i].singleton),
                          csv_number(rows[i].err), std::to_string(rows[i].cert)});
  }
  o.pass = worst <= 1e-9;
  o.verdict = json{{"max_relative_error", worst}, {"tolerance", 1e-9}, {"grid", k}, {"samples", *cfg.samples}};
  return o;
}

inline ProbeOutcome lem1e(ExperimentConfig& cfg) {
  cfg.default_params(1.0, 2.0, 0.25);
  if (!cfg.K) cfg.K = 200;
  if (!cfg.parts) cfg.parts = 1;
  if (*cfg.parts < 1) throw InputError("config field 'parts' must be positive");
  const auto params = cfg.params();
  const auto r = lem1e_divergence_probe(*cfg.K, *cfg.parts, params, cfg.K_list);
  ProbeOutcome o;
  o.csv_header = {"K [shells]", "partial_sum [1]", "shell_mass [length]", "threshold [length]"};
  for (int k = 1; k <= *cfg.K; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    o.csv_rows.push_back({std::to_string(k), csv_number(r.partial_sums[uk - 1]), csv_number(r.shells.shell_mass(k)),
                          csv_number(r.shells.t[uk])});
  }
  const double rel = relative_error(r.growth.rate, r.expected_rate);
  o.pass = r.growth.fit_class == GrowthClass::logarithmic && rel <= 0.1 && r.growth.rate >= r.mass_rate * (1 - 0.1);
  o.verdict = json{{"growth", to_json(r.growth)},
                   {"expected_rate", r.expected_rate},
                   {"mass_rate", r.mass_rate},
                   {"rate_relative_error", rel},
                   {"Z", r.shells.Z}};
  return o;
}

inline ProbeOutcome prop_rn(ExperimentConfig& cfg) {
  cfg.default_params(2.0, 1.0, -0.25);
  if (cfg.L_list.empty()) cfg.L_list = {10, 100, 1000};
  if (!cfg.depth) cfg.depth = 40;
  const auto params = cfg.params();
  params.require_main_regime("prop-rn");
  const int n = cfg.n;
  const int m_max = *cfg.depth;
  if (m_max < 1 || m_max > 60) throw InputError("config field 'depth' (largest root exponent) must lie in [1, 60]");
  const double theta = *params.theta();
  const long L_max = *std::max_element(cfg.L_list.begin(), cfg.L_list.end());
  if (L_max > kSparseMaxL) throw InputError("config field 'L_list' exceeds " + std::to_string(kSparseMaxL));
  const auto f = sparse_function(static_cast<int>(L_max), n);
  const auto whole = Domain::whole_space(n);

  // (a) and (c): integral of |f|^theta and the weak norm along truncations.
  std::vector<long> Ls = log_spaced(std::min<long>(10, L_max), L_max, 12);
  for (long L : cfg.L_list) Ls.push_back(L);
  std::sort(Ls.begin(), Ls.end());
  Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
  std::vector<std::size_t> cuts(Ls.begin(), Ls.end());
  const auto leb = lebesgue_norm(f, whole, theta, cuts);
  std::map<long, double> integral;
  for (const auto& tp : leb.trace) integral[tp.index] = std::pow(tp.value, theta);
  std::vector<GrowthSample> samples;
  std::vector<double> weak;
  bool weak_increasing = true;
  for (long L : Ls) {
    samples.push_back({L, integral.at(L)});
    weak.push_back(weak_norm(sparse_function(static_cast<int>(L), n), params.p(), params.alpha()));
    if (weak.size() > 1 && !(weak.back() > weak[weak.size() - 2])) weak_increasing = false;
  }
  const auto growth = growth_probe(samples);

  // (b): dyadic programs over expanding roots [0, 2^m]^n against I1 + I2.
  const auto I1 = bound_I1(params, n);
  const auto I2 = bound_I2(L_max, params);
  const double bound = I1.value + I2.value;
  std::vector<int> ms;
  for (int m = 2; m <= m_max; m += 2) ms.push_back(m);
  if (ms.empty() || ms.back() != m_max) ms.push_back(m_max);
  auto dp = parallel_map(ms.size(), [&](std::size_t i) {
    const int m = ms[i];
    DyadicOptions opt;
    opt.offsets = cfg.offsets;
    opt.parallel = false;
    const Cube root(Coords<double>(static_cast<std::size_t>(n), 0.0), std::ldexp(1.0, m));
    return rm_norm_dyadic(f, root, m + 8, params, opt).power_sum;
  });
  bool dp_ok = true;
  double dp_max = 0.0;
  for (double v : dp) {
    dp_max = std::max(dp_max, v);
    if (!(v <= bound)) dp_ok = false;
  }

  ProbeOutcome o;
  o.csv_header = {"kind", "index", "value [1]"};
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    o.csv_rows.push_back({"theta_integral", std::to_string(Ls[i]), csv_number(samples[i].value)});
    o.csv_rows.push_back({"weak_norm", std::to_string(Ls[i]), csv_number(weak[i])});
  }
  for (std::size_t i = 0; i < ms.size(); ++i) {
    o.csv_rows.push_back({"dyadic_power_sum_root_log2", std::to_string(ms[i]), csv_number(dp[i])});
  }
  const bool growth_ok = growth.fit_class == GrowthClass::logarithmic && std::abs(growth.rate - 1.0) <= 0.05;
  o.pass = growth_ok && dp_ok && weak_increasing;
  json H = json::object();
  for (long L : cfg.L_list) H[std::to_string(L)] = integral.at(L);
  o.verdict = json{{"theta", theta},
                   {"theta_integral", H},
                   {"theta_integral_growth", to_json(growth)},
                   {"weak_norm_increasing", weak_increasing},
                   {"weak_norm_last", weak.back()},
                   {"bound_I1", {{"value", I1.value}, {"g_sup", I1.g_sup}, {"t_star", I1.t_star},
                                 {"geometric", I1.geometric}}},
                   {"bound_I2", to_json(I2)},
                   {"dyadic_power_sum_max", dp_max},
                   {"dyadic_within_bound", dp_ok}};
  return o;
}

inline ProbeOutcome prop_q(ExperimentConfig& cfg) {
  cfg.default_params(2.0, 1.0, -0.25);
  if (!cfg.depth) cfg.depth = 12;
  const auto params = cfg.params();
  params.require_main_regime("prop-q");
  const int D = *cfg.depth;
  if (D < 2 || D > 16) throw InputError("config field 'depth' must lie in [2, 16] for prop-q");
  const double theta = *params.theta();
  const auto t = build_tree<quad>(cfg.n, D, params);
  const auto f = tree_function(t);
  const auto Q0 = t.domain_cube();
  const auto domain = BasicDomain<quad>::cube(Q0);

  bool disjoint = pairwise_interiors_disjoint(std::span<const QCube>(f.supports()));
  bool inside = true;
  for (const auto& c : f.supports()) inside = inside && Q0.contains(c);

  std::vector<double> level_integral;
  double worst_level = 0.0;
  for (int i = 0; i <= D; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double acc = 0.0;
    for (const auto& c : t.levels[ui]) acc += std::pow(t.h[ui], theta) * to_double(c.volume());
    level_integral.push_back(acc);
    worst_level = std::max(worst_level, relative_error(acc, std::pow(2.0, -0.5)));
  }
  const double lq = q_power_integral(f, Q0, params.q());
  const double lq_closed = tree_lq_closed_form(D, params, params.q());
  const double lq_err = relative_error(lq, lq_closed);

  std::vector<GrowthSample> cumulative;
  double acc = 0.0;
  for (int i = 0; i <= D; ++i) {
    acc += level_integral[static_cast<std::size_t>(i)];
    cumulative.push_back({i + 1, acc});
  }
  const auto growth = growth_probe(cumulative);

  const double Lone = bound_Lone(params);
  struct DpRow {
    int depth;
    int dp_depth;
    double value;
    double bound;
  };
  std::vector<DpRow> dp;
  for (int d = D - 2; d <= D; ++d) {
    const auto td = build_tree<quad>(cfg.n, d, params);
    DyadicOptions opt;
    opt.offsets = cfg.offsets;
    const auto dom = BasicDomain<quad>::cube(td.domain_cube());
    const int dd = resolving_depth(td);
    const auto est = rm_norm_dyadic(tree_function(td), td.domain_cube(), dd, params, opt, &dom);
    dp.push_back({d, dd, est.power_sum, Lone + bound_Lmore(td).value});
  }
  const double increase = dp.back().value / dp.front().value - 1.0;
  bool below = true;
  for (const auto& r : dp) below = below && r.value <= r.bound;

  ProbeOutcome o;
  o.csv_header = {"kind", "index", "value [1]"};
  for (int i = 0; i <= D; ++i) {
    o.csv_rows.push_back({"level_theta_integral", std::to_string(i), csv_number(level_integral[static_cast<std::size_t>(i)])});
  }
  for (const auto& r : dp) o.csv_rows.push_back({"dyadic_power_sum_tree_depth", std::to_string(r.depth), csv_number(r.value)});
  o.pass = disjoint && inside && worst_level <= 1e-12 && lq_err <= 1e-9 && increase < 0.01 && below &&
           growth.fit_class == GrowthClass::linear;
  json dpj = json::array();
  for (const auto& r : dp) {
    dpj.push_back(json{{"tree_depth", r.depth}, {"dp_depth", r.dp_depth}, {"power_sum", r.value}, {"bound", r.bound}});
  }
  o.verdict = json{{"N0", t.N0},
                   {"L0", to_double(t.L0)},
                   {"cubes", t.cube_count()},
                   {"disjoint", disjoint},
                   {"inside_Q0", inside},
                   {"level_integral_max_relative_error", worst_level},
                   {"lq_integral", lq},
                   {"lq_closed_form", lq_closed},
                   {"lq_relative_error", lq_err},
                   {"theta_integral_growth", to_json(growth)},
                   {"bound_Lone", Lone},
                   {"dyadic", dpj},
                   {"relative_increase", increase}};
  return o;
}

inline ProbeOutcome embedding(ExperimentConfig& cfg) {
  if (!cfg.samples) cfg.samples = 1000;
  const int n = cfg.n;
  if (n < 1 || n > 3) throw InputError("config field 'n' must lie in [1, 3] for embedding");
  const int level = n == 1 ? 6 : (n == 2 ? 4 : 3);
  const Cube Q0 = unit_cube(n);
  const Cube big(Coords<double>(static_cast<std::size_t>(n), -0.5), 2.0);
  struct Row {
    double p, q, alpha, ratio;
    std::size_t violations;
  };
  auto rows = parallel_map(static_cast<std::size_t>(*cfg.samples), [&](std::size_t i) {
    auto rng = sample_rng(cfg.seed, i);
    const auto params = random_main_regime(rng);
    const auto f = random_dyadic_step_function(rng, Q0, level);
    std::vector<CubeFamily> fams{random_family(rng, Q0, level), random_family(rng, big, level + 1),
                                 CubeFamily{Q0}};
    const auto c = check_embedding(f, std::span<const CubeFamily>(fams), params);
    return Row{params.p(), params.q(), params.alpha(), c.worst_ratio, c.violations};
  });
  ProbeOutcome o;
  o.csv_header = {"sample", "p [1]", "q [1]", "alpha [1]", "worst_ratio [1]", "violations [count]"};
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    violations += rows[i].violations;
    worst = std::max(worst, rows[i].ratio);
    o.csv_rows.push_back({std::to_string(i), csv_number(rows[i].p), csv_number(rows[i].q), csv_number(rows[i].alpha),
                          csv_number(rows[i].ratio), std::to_string(rows[i].violations)});
  }
  o.pass = violations == 0;
  o.verdict = json{{"violations", violations}, {"worst_ratio", worst}, {"samples", *cfg.samples}};
  return o;
}

inline ProbeOutcome inequalities(ExperimentConfig& cfg) {
  if (!cfg.samples) cfg.samples = 10000;
  struct Row {
    double gamma;
    std::size_t len;
    bool holds;
    double equality_error;
  };
  auto rows = parallel_map(static_cast<std::size_t>(*cfg.samples), [&](std::size_t i) {
    auto rng = sample_rng(cfg.seed, i);
    std::uniform_int_distribution<std::size_t> len(1, 30);
    std::uniform_real_distribution<double> loga(-5.0, 5.0);
    std::uniform_real_distribution<double> g(0.0, 4.0);
    const std::size_t m = len(rng);
    std::vector<double> a(m);
    for (auto& x : a) x = std::exp(loga(rng));
    const double gamma = g(rng);
    const auto r = check_power_sum_inequalities(a, gamma, m);
    // Constant sequence: parts (ii) and (iv) are equalities.
    std::vector<double> c(m, a.front());
    const auto e = check_power_sum_inequalities(c, gamma, m);
    return Row{gamma, m, r.all_hold() && e.all_hold(),
               relative_error(e.sum_of_powers, e.count_factor * e.power_of_sum)};
  });
  ProbeOutcome o;
  o.csv_header = {"sample", "gamma [1]", "length [count]", "holds", "equality_relative_error [1]"};
  std::size_t violations = 0;
  double worst_eq = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].holds) ++violations;
    worst_eq = std::max(worst_eq, rows[i].equality_error);
    o.csv_rows.push_back({std::to_string(i), csv_number(rows[i].gamma), std::to_string(rows[i].len),
                          rows[i].holds ? "1" : "0", csv_number(rows[i].equality_error)});
  }
  o.pass = violations == 0 && worst_eq <= 1e-12;
  o.verdict = json{{"violations", violations}, {"equality_max_relative_error", worst_eq}, {"samples", *cfg.samples}};
  return o;
}

inline std::vector<std::vector<std::string>> classification_rows() {
  std::vector<std::vector<std::string>> rows;
  for (const auto& ps : classification_grid()) {
    for (auto kind : {DomainKind::whole_space, DomainKind::cube}) {
      const auto c = classify(ps.p(), ps.q(), ps.alpha(), kind);
      rows.push_back({csv_number(ps.p()), csv_number(ps.q()), csv_number(ps.alpha()),
                      kind == DomainKind::whole_space ? "rn" : "cube", to_string(c.verdict),
                      c.theta ? csv_number(*c.theta) : "", c.citation});
    }
  }
  return rows;
}

inline const std::vector<std::string>& classification_header() {
  static const std::vector<std::string> h{"p [1]", "q [1]", "alpha [1]", "domain", "verdict", "theta [1]", "case"};
  return h;
}

inline ProbeOutcome classify_sweep(ExperimentConfig&) {
  ProbeOutcome o;
  o.csv_header = classification_header();
  o.csv_rows = classification_rows();
  struct Spot {
    double p, q, alpha;
    DomainKind d;
    Verdict v;
  };
  const std::vector<Spot> spots{{2, 1, 0.0, DomainKind::whole_space, Verdict::EqualsLp},
                                {2, 1, -0.25, DomainKind::whole_space, Verdict::ProperSupersetOfLtheta},
                                {1, 2, 0.1, DomainKind::cube, Verdict::ZeroSpace},
                                {kInf, 2, -0.25, DomainKind::whole_space, Verdict::EqualsMorrey}};
  bool ok = true;
  json checks = json::array();
  for (const auto& s : spots) {
    const auto c = classify(s.p, s.q, s.alpha, s.d);
    ok = ok && c.verdict == s.v;
    checks.push_back(json{{"p", scalar_to_json(s.p)}, {"q", s.q}, {"alpha", s.alpha},
                          {"domain", s.d == DomainKind::whole_space ? "rn" : "cube"},
                          {"verdict", to_string(c.verdict)}, {"expected", to_string(s.v)}});
  }
  const auto theta = classify(2, 1, -0.25, DomainKind::whole_space).theta;
  ok = ok && theta && std::abs(*theta - 4.0 / 3.0) <= 1e-12;
  o.pass = ok;
  o.verdict = json{{"grid_points", o.csv_rows.size()}, {"spot_checks", checks}};
  return o;
}

}  // namespace probes

using ProbeFn = std::function<ProbeOutcome(ExperimentConfig&)>;

/// Probe registry, sorted by name.
inline const std::map<std::string, ProbeFn>& probe_registry() {
  static const std::map<std::string, ProbeFn> reg{
      {"classify-sweep", probes::classify_sweep}, {"embedding", probes::embedding},
      {"inequalities", probes::inequalities},     {"lem1e", probes::lem1e},
      {"prop-q", probes::prop_q},                 {"prop-rn", probes::prop_rn},
      {"q23-identity", probes::q23_identity},     {"riesz-identity", probes::riesz_identity}};
  return reg;
}

}  // namespace rmlab
