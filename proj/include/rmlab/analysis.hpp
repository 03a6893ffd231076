#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "rmlab/constructions.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/funcrep.hpp"
#include "rmlab/geometry.hpp"
#include "rmlab/norms.hpp"
#include "rmlab/params.hpp"
#include "rmlab/series.hpp"

namespace rmlab {

inline constexpr double kCheckTol = 1e-12;

/// theta = p / (1 - p alpha).
inline double interpolation_index(double p, double alpha) {
  if (!(p >= 1.0) || std::isinf(p)) throw RegimeError("interpolation_index: p must lie in [1, inf)");
  const double denom = 1.0 - p * alpha;
  if (denom == 0.0) throw RegimeError("interpolation_index: p alpha = 1");
  return p / denom;
}

// ---------------------------------------------------------------------------
// Power sums.

/// Four comparisons between sum a_j^gamma and (sum a_j)^gamma over the first
/// N entries. A part outside its gamma range is left empty.
struct PowerSumReport {
  double sum_of_powers = 0.0;  // sum a_j^gamma
  double power_of_sum = 0.0;   // (sum a_j)^gamma
  double count_factor = 0.0;   // N^{1 - gamma}
  std::optional<bool> part_i;    // gamma >= 1: sum a^g <= (sum a)^g
  std::optional<bool> part_ii;   // gamma in [0,1]: sum a^g <= N^{1-g} (sum a)^g
  std::optional<bool> part_iii;  // gamma in [0,1]: sum a^g >= (sum a)^g
  std::optional<bool> part_iv;   // gamma >= 1: sum a^g >= N^{1-g} (sum a)^g

  bool all_hold() const {
    for (const auto& p : {part_i, part_ii, part_iii, part_iv}) {
      if (p && !*p) return false;
    }
    return true;
  }
};

inline PowerSumReport check_power_sum_inequalities(std::span<const double> a, double gamma, std::size_t N) {
  if (a.empty() || N == 0) throw InputError("check_power_sum_inequalities: empty sequence");
  N = std::min(N, a.size());
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("check_power_sum_inequalities: gamma must be >= 0");
  PowerSumReport r;
  double s = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    if (!(a[j] > 0.0) || !std::isfinite(a[j])) throw InputError("check_power_sum_inequalities: entries must be positive");
    s += a[j];
    r.sum_of_powers += std::pow(a[j], gamma);
  }
  r.power_of_sum = std::pow(s, gamma);
  r.count_factor = std::pow(static_cast<double>(N), 1.0 - gamma);
  const double lhs = r.sum_of_powers;
  const double top = r.power_of_sum;
  const double scaled = r.count_factor * r.power_of_sum;
  auto le = [](double x, double y) { return x <= y * (1.0 + kCheckTol); };
  if (gamma >= 1.0) {
    r.part_i = le(lhs, top);
    r.part_iv = le(scaled, lhs);
  }
  if (gamma <= 1.0) {
    r.part_ii = le(lhs, scaled);
    r.part_iii = le(top, lhs);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hoelder and embedding checks.

struct HolderCheck {
  double lhs = 0.0;  // |Q|^{1 - p alpha - p/q} ||f||^p_{L^q(Q)}
  double rhs = 0.0;  // (integral over Q of |f|^theta)^{1 - p alpha}
  bool holds = true;
};

template <class Real>
HolderCheck check_holder_cube(const BasicStepFunction<Real>& f, const BasicCube<Real>& Q, const ParamSpace& params) {
  params.require_main_regime("check_holder_cube");
  const double theta = *params.theta();
  HolderCheck c;
  c.lhs = rm_term(f, Q, params);
  c.rhs = std::pow(q_power_integral(f, Q, theta), 1.0 - params.p() * params.alpha());
  c.holds = c.lhs <= c.rhs * (1.0 + kCheckTol);
  return c;
}

struct EmbeddingCheck {
  double lebesgue = 0.0;  // ||f||_{L^theta}
  double worst_ratio = 0.0;  // max over families of score^{1/p} / ||f||_{L^theta}
  std::size_t violations = 0;
  bool holds = true;
};

/// rm_score(f, F)^{1/p} <= ||f||_{L^theta(X)} for every family F.
template <class Real>
EmbeddingCheck check_embedding(const BasicStepFunction<Real>& f, std::span<const BasicCubeFamily<Real>> families,
                               const ParamSpace& params, const BasicDomain<Real>* domain = nullptr) {
  params.require_main_regime("check_embedding");
  const double theta = *params.theta();
  const auto X = domain ? *domain : BasicDomain<Real>::whole_space(f.dim());
  EmbeddingCheck c;
  c.lebesgue = lebesgue_norm(f, X, theta).value;
  for (const auto& F : families) {
    const double lhs = std::pow(rm_score(f, F, params, domain), 1.0 / params.p());
    if (!(lhs <= c.lebesgue * (1.0 + kCheckTol))) ++c.violations;
    if (c.lebesgue > 0.0) {
      c.worst_ratio = std::max(c.worst_ratio, lhs / c.lebesgue);
    } else if (lhs > 0.0) {
      c.worst_ratio = kInf;
    }
  }
  c.holds = c.violations == 0;
  return c;
}

// ---------------------------------------------------------------------------
// Classification of RM_{p,q,alpha}(X).

enum class Verdict { ZeroSpace, EqualsLq, EqualsLp, ProperSupersetOfLtheta, EqualsMorrey };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ZeroSpace:
      return "ZeroSpace";
    case Verdict::EqualsLq:
      return "EqualsLq";
    case Verdict::EqualsLp:
      return "EqualsLp";
    case Verdict::ProperSupersetOfLtheta:
      return "ProperSupersetOfLtheta";
    case Verdict::EqualsMorrey:
      return "EqualsMorrey";
  }
  return "unknown";
}

struct Classification {
  Verdict verdict = Verdict::ZeroSpace;
  std::optional<double> theta;
  /// Which case of the table applied: "rn:q<p", "rn:q>=p", "cube:q<p", "cube:q>=p".
  std::string citation;
};

/// Boundary comparisons on alpha use this absolute tolerance, so that
/// alpha = 1/p - 1/q computed in floating point lands on the boundary.
inline constexpr double kAlphaBoundaryTol = 1e-12;

inline Classification classify(double p, double q, double alpha, DomainKind domain) {
  const ParamSpace ps(p, q, alpha);
  const double d = ps.critical_alpha();
  auto eq = [](double x, double y) { return std::abs(x - y) <= kAlphaBoundaryTol; };
  const bool rn = domain == DomainKind::whole_space;
  Classification c;
  if (q < p) {
    // p in (1, inf], q in [1, p).
    c.citation = rn ? "rn:q<p" : "cube:q<p";
    if (eq(alpha, 0.0)) {
      c.verdict = Verdict::EqualsLp;
    } else if (eq(alpha, d) || (!rn && alpha < d)) {
      c.verdict = Verdict::EqualsLq;
    } else if (alpha > d && alpha < 0.0) {
      c.verdict = ps.p_infinite() ? Verdict::EqualsMorrey : Verdict::ProperSupersetOfLtheta;
      c.theta = ps.theta();
    } else {
      c.verdict = Verdict::ZeroSpace;
    }
    return c;
  }
  // p in [1, inf], q in [p, inf].
  c.citation = rn ? "rn:q>=p" : "cube:q>=p";
  if (rn) {
    c.verdict = (eq(d, 0.0) && eq(alpha, 0.0)) ? Verdict::EqualsLq : Verdict::ZeroSpace;
  } else {
    c.verdict = (alpha <= 0.0 || eq(alpha, 0.0)) ? Verdict::EqualsLq : Verdict::ZeroSpace;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Growth of truncation sequences.

enum class GrowthClass { bounded, logarithmic, linear, inconclusive };

inline const char* to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::bounded:
      return "bounded";
    case GrowthClass::logarithmic:
      return "logarithmic";
    case GrowthClass::linear:
      return "linear";
    case GrowthClass::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

struct GrowthSample {
  long K = 0;
  double value = 0.0;
};

/// Least-squares fits of the partial sums S_K against three models:
///   bounded      a + b K^s, s < 0 estimated from the local log-slopes,
///   logarithmic  a + b ln K,
///   linear       a + b K.
/// The local slope sigma_j = dS / d(ln K) between consecutive samples scales
/// like K^s; the bounded model is admitted only when s <= kBoundedSlopeExponent
/// (or when all increments vanish). The winner must have a residual at most
/// 1/kResidualRatio of the runner-up's, otherwise the report is inconclusive.
struct GrowthReport {
  std::vector<GrowthSample> samples;
  GrowthClass fit_class = GrowthClass::inconclusive;
  /// Slope b of the winning model (limit a for bounded).
  double rate = 0.0;
  double residual = 0.0;
  double rss_bounded = kInf;
  double rss_log = kInf;
  double rss_linear = kInf;
  double log_rate = 0.0;
  double linear_rate = 0.0;
  double bounded_limit = 0.0;
  double slope_exponent = 0.0;
};

inline constexpr double kBoundedSlopeExponent = -0.2;
inline constexpr double kResidualRatio = 10.0;

namespace detail {

struct LineFit {
  double a = 0.0;
  double b = 0.0;
  double rss = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.b = sxx > 0.0 ? sxy / sxx : 0.0;
  f.a = my - f.b * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.a - f.b * x[i];
    f.rss += r * r;
  }
  return f;
}

}  // namespace detail

inline GrowthReport growth_probe(std::vector<GrowthSample> samples) {
  if (samples.size() < 3) throw InputError("growth_probe: need at least 3 samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].K <= samples[i - 1].K) throw InputError("growth_probe: K values must increase");
    const double slack = 1e-12 * std::max(1.0, std::abs(samples[i - 1].value));
    if (samples[i].value < samples[i - 1].value - slack) {
      throw InputError("growth_probe: partial sums decrease between K=" + std::to_string(samples[i - 1].K) +
                       " and K=" + std::to_string(samples[i].K));
    }
  }
  if (samples.front().K < 1) throw InputError("growth_probe: K must be >= 1");
  GrowthReport r;
  r.samples = samples;
  std::vector<double> K;
  std::vector<double> lnK;
  std::vector<double> S;
  for (const auto& s : samples) {
    K.push_back(static_cast<double>(s.K));
    lnK.push_back(std::log(static_cast<double>(s.K)));
    S.push_back(s.value);
  }
  const auto lg = detail::fit_line(lnK, S);
  const auto ln = detail::fit_line(K, S);
  r.rss_log = lg.rss;
  r.log_rate = lg.b;
  r.rss_linear = ln.rss;
  r.linear_rate = ln.b;

  // Local slopes in ln K.
  const double scale = std::max(1.0, *std::max_element(S.begin(), S.end()));
  std::vector<double> lx;
  std::vector<double> ly;
  bool any_increase = false;
  for (std::size_t i = 0; i + 1 < S.size(); ++i) {
    const double dS = S[i + 1] - S[i];
    if (dS > 1e-13 * scale) {
      any_increase = true;
      lx.push_back(0.5 * (lnK[i] + lnK[i + 1]));
      ly.push_back(std::log(dS / (lnK[i + 1] - lnK[i])));
    }
  }
  bool bounded_ok = false;
  if (!any_increase) {
    bounded_ok = true;
    r.slope_exponent = -kInf;
    r.rss_bounded = 0.0;
    r.bounded_limit = S.back();
    for (double v : S) r.rss_bounded += (v - S.back()) * (v - S.back());
  } else if (lx.size() >= 2) {
    r.slope_exponent = detail::fit_line(lx, ly).b;
  } else {
    // A single increase followed by a plateau.
    r.slope_exponent = -kInf;
  }
  if (any_increase && r.slope_exponent <= kBoundedSlopeExponent) {
    bounded_ok = true;
    std::vector<double> Ks;
    for (double k : K) Ks.push_back(std::isinf(r.slope_exponent) ? 0.0 : std::pow(k, r.slope_exponent));
    const auto bf = detail::fit_line(Ks, S);
    r.rss_bounded = bf.rss;
    r.bounded_limit = bf.a;
  }

  struct Candidate {
    GrowthClass cls;
    double rss;
    double rate;
  };
  std::vector<Candidate> c{{GrowthClass::logarithmic, r.rss_log, r.log_rate},
                           {GrowthClass::linear, r.rss_linear, r.linear_rate}};
  if (bounded_ok) c.push_back({GrowthClass::bounded, r.rss_bounded, r.bounded_limit});
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) { return a.rss < b.rss; });
  const double tiny = 1e-28 * scale * scale * static_cast<double>(S.size());
  const bool decisive = c[1].rss > tiny && c[0].rss * kResidualRatio <= c[1].rss;
  r.residual = c[0].rss;
  if (decisive) {
    r.fit_class = c[0].cls;
    r.rate = c[0].rate;
  } else if (!any_increase) {
    r.fit_class = GrowthClass::bounded;
    r.rate = r.bounded_limit;
  }
  return r;
}

/// Samples `partial(K)` at each K and classifies the growth.
inline GrowthReport growth_probe(const std::function<double(long)>& partial, std::span<const long> K_list) {
  std::vector<GrowthSample> s;
  for (long K : K_list) s.push_back({K, partial(K)});
  return growth_probe(std::move(s));
}

/// Roughly log-spaced integers from lo to hi inclusive.
inline std::vector<long> log_spaced(long lo, long hi, int count) {
  std::vector<long> out;
  if (lo < 1 || hi < lo || count < 2) throw InputError("log_spaced: need 1 <= lo <= hi and count >= 2");
  for (int i = 0; i < count; ++i) {
    double t = std::log(static_cast<double>(lo)) +
               (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(lo))) * i / (count - 1);
    long k = std::lround(std::exp(t));
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

// ---------------------------------------------------------------------------
// Analytic bounds for the sparse family on R^n.

/// I_2 <= sum_l l^{p alpha - 1}: the partial sum to L plus the tail.
inline SeriesSum bound_I2(long L, const ParamSpace& params) {
  params.require_main_regime("bound_I2");
  return power_series(1.0 - params.p() * params.alpha(), L);
}

struct I1Bound {
  double g_sup = 0.0;     // sup over t >= 1 of g
  double t_star = 1.0;    // maximizer
  double geometric = 0.0; // sum_{k>=1} 2^{k n (1 - p alpha - p/q)}
  double value = 0.0;     // g_sup * geometric
};

/// g(t) = t^{p/q} / (2^t - 3/2)^{n (p/q + p alpha - 1)}.
inline double bound_I1_g(double t, const ParamSpace& params, int n) {
  const double pq = params.p() / params.q();
  const double c = n * (pq + params.p() * params.alpha() - 1.0);
  return std::pow(t, pq) / std::pow(std::exp2(t) - 1.5, c);
}

inline I1Bound bound_I1(const ParamSpace& params, int n) {
  params.require_main_regime("bound_I1");
  const double e = params.cube_exponent();
  if (!(e < 0.0)) throw RegimeError("bound_I1: requires 1 - p alpha - p/q < 0");
  const double pq = params.p() / params.q();
  const double c = n * (pq + params.p() * params.alpha() - 1.0);
  auto log_g = [&](double t) { return pq * std::log(t) - c * std::log(std::exp2(t) - 1.5); };
  // log g decreases once c t ln 2 outgrows (p/q) ln t; scan well past that.
  const double t_max = std::max(64.0, 8.0 * pq / (c * std::log(2.0)) + 64.0);
  const int grid = 20000;
  double best_t = 1.0;
  double best = log_g(1.0);
  for (int i = 1; i <= grid; ++i) {
    const double t = 1.0 + (t_max - 1.0) * i / grid;
    const double v = log_g(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  const double h = (t_max - 1.0) / grid;
  const double lo = std::max(1.0, best_t - h);
  const double hi = std::min(t_max, best_t + h);
  auto [t_ref, neg] = boost::math::tools::brent_find_minima([&](double t) { return -log_g(t); }, lo, hi, 40);
  if (-neg > best) {
    best = -neg;
    best_t = t_ref;
  }
  I1Bound b;
  b.t_star = best_t;
  b.g_sup = std::exp(best);
  const double r = std::pow(2.0, n * e);
  b.geometric = r / (1.0 - r);
  b.value = b.g_sup * b.geometric;
  return b;
}

// ---------------------------------------------------------------------------
// Analytic bounds for the descendant tree on a cube.

/// Families meeting a single tree cube: 2^{(1 - p alpha)/2} / (1 - 2^{p alpha}).
inline double bound_Lone(const ParamSpace& params) {
  const double pa = params.p() * params.alpha();
  if (params.p_infinite() || !(params.alpha() < 0.0)) throw RegimeError("bound_Lone: requires finite p and alpha < 0");
  return std::pow(2.0, (1.0 - pa) / 2.0) / (1.0 - std::pow(2.0, pa));
}

struct LmoreBound {
  double value = 0.0;
  std::vector<double> per_level;  // bound on the level-i part
};

/// Families meeting several tree cubes, for the tree truncated at its depth:
/// sum_i 2^{i+1} (delta_i / sqrt n)^{n e} S_i^{p/q}, e = 1 - p alpha - p/q and
/// S_i = sum_{k=i}^{depth} 2^{k-i} h_k^q l_k^n bounding ||f||^q_{L^q(Q)}.
template <class Real>
LmoreBound bound_Lmore(const TreeConstruction<Real>& t) {
  const ParamSpace& ps = t.params;
  ps.require_main_regime("bound_Lmore");
  const double q = ps.q();
  const double e = ps.cube_exponent();
  const int n = t.n;
  LmoreBound b;
  for (int i = 0; i <= t.depth; ++i) {
    double S = 0.0;
    for (int k = i; k <= t.depth; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      S += std::ldexp(1.0, k - i) * std::pow(t.h[uk], q) * std::pow(to_double(t.l[uk]), n);
    }
    const double side = to_double(t.delta_hat[static_cast<std::size_t>(i)]) / std::sqrt(static_cast<double>(n));
    const double level = std::ldexp(1.0, i + 1) * std::pow(side, n * e) * std::pow(S, ps.p() / q);
    b.per_level.push_back(level);
    b.value += level;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Divergence on shells of a cube in the zero-space regime.

struct Lem1eReport {
  ShellConstruction shells;
  std::vector<double> partial_sums;  // S_1..S_K
  GrowthReport growth;
  /// (2P)^{p alpha} (|E| / (2Z))^{1 - p alpha}: the exact per-shell coefficient
  /// of 1/k for the equal split into P intervals per side.
  double expected_rate = 0.0;
  /// (|E| / (2Z))^{1 - p alpha}: the coefficient with the shell counted as one mass.
  double mass_rate = 0.0;
};

inline Lem1eReport lem1e_divergence_probe(int K, int parts_per_side, const ParamSpace& params,
                                          std::span<const long> K_list = {}) {
  if (!params.in_zero_regime()) {
    throw RegimeError("lem1e_divergence_probe: requires p in [1,inf), q in (p,inf], alpha in (0,1/p-1/q); got " +
                      params.describe());
  }
  if (K < 3) throw RegimeError("lem1e_divergence_probe: K must be >= 3");
  Lem1eReport r;
  r.shells = shell_thresholds(params.p(), params.alpha(), K);
  const Cube E = Cube::interval(r.shells.e_lo, r.shells.e_hi);
  const StepFunction f(1, {{E, 1.0}});
  const Domain Q0 = Domain::cube(Cube::interval(-1.0, 1.0));
  double acc = 0.0;
  for (int k = 1; k <= K; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const auto family = shell_partition_1d(r.shells.t[uk - 1], r.shells.t[uk], parts_per_side);
    acc += rm_score(f, family, params, &Q0);
    r.partial_sums.push_back(acc);
  }
  std::vector<long> ks(K_list.begin(), K_list.end());
  if (ks.empty()) ks = log_spaced(std::min<long>(10, K / 2), K, 16);
  std::vector<GrowthSample> samples;
  for (long k : ks) {
    if (k < 1 || k > K) throw InputError("lem1e_divergence_probe: sample K out of range");
    samples.push_back({k, r.partial_sums[static_cast<std::size_t>(k - 1)]});
  }
  r.growth = growth_probe(std::move(samples));
  const double pa = params.p() * params.alpha();
  r.mass_rate = std::pow(r.shells.measure_E() / (2.0 * r.shells.Z), 1.0 - pa);
  r.expected_rate = std::pow(2.0 * parts_per_side, pa) * r.mass_rate;
  return r;
}

}  // namespace rmlab
