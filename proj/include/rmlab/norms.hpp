#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmlab/errors.hpp"
#include "rmlab/estimate.hpp"
#include "rmlab/funcrep.hpp"
#include "rmlab/geometry.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/params.hpp"
#include "rmlab/scalar.hpp"

namespace rmlab {

namespace detail {

/// |Q|^{1 - p alpha - p/q} ||f||_{L^q(Q)}^p from |Q|, the q-th power integral
/// and (for q = inf) the essential max.
inline double term_from(const ParamSpace& params, double vol, double qpow, double hmax) {
  const double p = params.p();
  if (params.q_infinite()) {
    if (hmax <= 0.0) return 0.0;
    return std::pow(vol, 1.0 - p * params.alpha()) * std::pow(hmax, p);
  }
  if (qpow <= 0.0) return 0.0;
  return std::pow(vol, params.cube_exponent()) * std::pow(qpow, p / params.q());
}

template <class Real>
void check_family(const BasicCubeFamily<Real>& family, int dim, const BasicDomain<Real>* domain) {
  for (const auto& c : family) {
    if (c.dim() != dim) throw GeometryError("family cube dimension does not match function");
    if (domain && !domain->contains(c)) throw GeometryError("family cube lies outside the domain");
  }
  if (!pairwise_interiors_disjoint(family)) throw GeometryError("family cubes have overlapping interiors");
}

}  // namespace detail

/// |Q|^{1 - p alpha - p/q} ||f||^p_{L^q(Q)} for one cube.
template <class Real>
double rm_term(const BasicStepFunction<Real>& f, const BasicCube<Real>& Q, const ParamSpace& params) {
  params.require_finite_p("rm_term");
  const double vol = to_double(Q.volume());
  if (params.q_infinite()) return detail::term_from(params, vol, 0.0, max_height_on(f, Q));
  return detail::term_from(params, vol, q_power_integral(f, Q, params.q()), 0.0);
}

/// sum over the family of |Q_i|^{1 - p alpha - p/q} ||f||^p_{L^q(Q_i)}.
template <class Real>
double rm_score(const BasicStepFunction<Real>& f, const BasicCubeFamily<Real>& family, const ParamSpace& params,
                const BasicDomain<Real>* domain = nullptr) {
  params.require_finite_p("rm_score");
  detail::check_family(family, f.dim(), domain);
  double acc = 0.0;
  for (const auto& Q : family) acc += rm_term(f, Q, params);
  return acc;
}

inline double rm_term(const RadialPower& f, const Cube& Q, const ParamSpace& params,
                      const QuadratureOptions& opt = {}) {
  params.require_finite_p("rm_term");
  const double vol = Q.volume();
  if (params.q_infinite()) return detail::term_from(params, vol, 0.0, lq_norm_on_cube(f, Q, kInf, opt));
  return detail::term_from(params, vol, q_power_integral(f, Q, params.q(), opt), 0.0);
}

inline double rm_score(const RadialPower& f, const CubeFamily& family, const ParamSpace& params,
                       const Domain* domain = nullptr, const QuadratureOptions& opt = {}) {
  params.require_finite_p("rm_score");
  detail::check_family(family, f.dim(), domain);
  double acc = 0.0;
  for (const auto& Q : family) acc += rm_term(f, Q, params, opt);
  return acc;
}

// ---------------------------------------------------------------------------
// Dyadic dynamic program.

struct DyadicOptions {
  /// Diagonal shifts of the root, as fractions of the root side.
  std::vector<double> offsets{0.0, 1.0 / 3.0, 2.0 / 3.0};
  /// A cube is kept over its children unless they beat it by this relative margin.
  double tie_rel = 1e-12;
  std::size_t max_certificate = std::size_t{1} << 22;
  bool parallel = true;
};

namespace detail {

template <class Real>
class DyadicSolver {
 public:
  DyadicSolver(const BasicStepFunction<Real>& f, const ParamSpace& params, const BasicDomain<Real>* domain,
               const DyadicOptions& opt)
      : f_(f), params_(params), domain_(domain), opt_(opt) {
    const double q = params.q_infinite() ? 1.0 : params.q();
    for (const auto& pc : f.pieces()) hq_.push_back(std::pow(pc.height, q));
    pa_ = params.p() * params.alpha();
  }

  std::vector<std::uint32_t> initial_candidates() const {
    std::vector<std::uint32_t> c;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      if (f_.pieces()[i].height > 0.0) c.push_back(static_cast<std::uint32_t>(i));
    }
    return c;
  }

  /// best[k] for k = 0..remaining: the optimum over families of dyadic
  /// subcubes of `cell` at most k levels down. The certificate for k =
  /// remaining is appended to `cert`.
  std::vector<double> solve(const BasicCube<Real>& cell, int remaining, const std::vector<std::uint32_t>& parent,
                            BasicCubeFamily<Real>& cert) {
    std::vector<std::uint32_t> cand;
    double qpow = 0.0;
    double hmax = 0.0;
    for (auto idx : parent) {
      const auto& pc = f_.pieces()[idx];
      Real v = intersection_volume(cell, pc.support);
      if (v > 0) {
        cand.push_back(idx);
        qpow += hq_[idx] * to_double(v);
        hmax = std::max(hmax, pc.height);
      }
    }
    std::vector<double> best(static_cast<std::size_t>(remaining) + 1, 0.0);
    if (cand.empty()) return best;

    const bool feasible = !domain_ || domain_->contains(cell);
    const double score = feasible ? term_from(params_, to_double(cell.volume()), qpow, hmax) : 0.0;

    // Constant on the cell: refinement multiplies the score by 2^{n p alpha} <= 1.
    if (feasible && pa_ <= 0.0 && cand.size() == 1 && f_.pieces()[cand.front()].support.contains(cell)) {
      std::fill(best.begin(), best.end(), score);
      push(cert, cell);
      return best;
    }
    best[0] = score;
    if (remaining == 0) {
      if (score > 0.0) push(cert, cell);
      return best;
    }

    const std::size_t mark = cert.size();
    std::vector<double> sum(static_cast<std::size_t>(remaining), 0.0);
    for (const auto& child : dyadic_children(cell)) {
      auto b = solve(child, remaining - 1, cand, cert);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += b[k];
    }
    for (int k = 1; k <= remaining; ++k) {
      const double c = sum[static_cast<std::size_t>(k - 1)];
      best[static_cast<std::size_t>(k)] = keep_parent(score, c) ? score : c;
    }
    if (keep_parent(score, sum.back())) {
      cert.erase(cert.begin() + static_cast<std::ptrdiff_t>(mark), cert.end());
      if (score > 0.0) push(cert, cell);
    }
    return best;
  }

 private:
  bool keep_parent(double score, double children) const {
    return score > 0.0 && score >= children * (1.0 - opt_.tie_rel);
  }

  void push(BasicCubeFamily<Real>& cert, const BasicCube<Real>& c) const {
    if (cert.size() >= opt_.max_certificate) throw Error("dyadic certificate exceeds the configured size limit");
    cert.push_back(c);
  }

  const BasicStepFunction<Real>& f_;
  const ParamSpace& params_;
  const BasicDomain<Real>* domain_;
  const DyadicOptions& opt_;
  std::vector<double> hq_;
  double pa_ = 0.0;
};

template <class Real>
struct OffsetRun {
  std::vector<double> best;
  BasicCubeFamily<Real> cert;
};

}  // namespace detail

/// Certified lower bound for the RM norm: the best family of dyadic subcubes
/// of the (shifted) root, up to `depth` halvings. Cells leaving the domain
/// cannot be selected. The trace holds the norm reached at each depth.
template <class Real>
BasicNormEstimate<Real> rm_norm_dyadic(const BasicStepFunction<Real>& f, const BasicCube<Real>& root, int depth,
                                       const ParamSpace& params, const DyadicOptions& opt = {},
                                       const BasicDomain<Real>* domain = nullptr) {
  params.require_finite_p("rm_norm_dyadic");
  if (depth < 0) throw RegimeError("rm_norm_dyadic: depth must be >= 0");
  if (root.dim() != f.dim()) throw GeometryError("rm_norm_dyadic: root dimension mismatch");
  std::vector<double> offsets = opt.offsets.empty() ? std::vector<double>{0.0} : opt.offsets;

  auto run = [&](std::size_t i) {
    detail::DyadicSolver<Real> solver(f, params, domain, opt);
    detail::OffsetRun<Real> r;
    BasicCube<Real> shifted = root.shifted(root.side() * Real(offsets[i]));
    r.best = solver.solve(shifted, depth, solver.initial_candidates(), r.cert);
    return r;
  };
  std::vector<detail::OffsetRun<Real>> runs;
  if (opt.parallel) {
    runs = parallel_map(offsets.size(), run);
  } else {
    for (std::size_t i = 0; i < offsets.size(); ++i) runs.push_back(run(i));
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].best.back() > runs[arg].best.back()) arg = i;
  }
  BasicNormEstimate<Real> out;
  out.kind = BoundKind::lower;
  out.power_sum = runs[arg].best.back();
  out.value = std::pow(out.power_sum, 1.0 / params.p());
  out.certificate = std::move(runs[arg].cert);
  out.formula = "shifted dyadic dynamic program, offset " + std::to_string(offsets[arg]);
  for (int d = 0; d <= depth; ++d) {
    double m = 0.0;
    for (const auto& r : runs) m = std::max(m, r.best[static_cast<std::size_t>(d)]);
    out.trace.push_back({d, std::pow(m, 1.0 / params.p())});
  }
  return out;
}

namespace detail {

/// Scores of all intervals [cell i, cell j) of a uniform k-cell grid.
template <class Real>
std::vector<std::vector<double>> interval_scores(const BasicStepFunction<Real>& f, const BasicCube<Real>& root,
                                                 int k, const ParamSpace& params) {
  if (f.dim() != 1 || root.dim() != 1) throw GeometryError("one-dimensional grid oracle requires n = 1");
  if (k < 1) throw RegimeError("grid must have at least one cell");
  params.require_finite_p("grid oracle");
  const Real a = root.lower(0);
  const Real w = root.side() / Real(k);
  std::vector<std::vector<double>> s(static_cast<std::size_t>(k) + 1, std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      const auto I = BasicCube<Real>::interval(a + w * Real(i), j == k ? root.upper(0) : a + w * Real(j));
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rm_term(f, I, params);
    }
  }
  return s;
}

inline bool is_dyadic_interval(int i, int j) {
  const int len = j - i;
  return len > 0 && (len & (len - 1)) == 0 && i % len == 0;
}

}  // namespace detail

inline constexpr int kBruteForceMaxCells = 14;

/// Maximum of the family score over every composition of a k-cell grid of
/// the root into consecutive intervals (2^{k-1} of them). With dyadic_only,
/// only compositions into dyadic intervals are admitted (k a power of two).
template <class Real>
BasicNormEstimate<Real> rm_norm_bruteforce_1d(const BasicStepFunction<Real>& f, const BasicCube<Real>& root,
                                              int grid_k, const ParamSpace& params, bool dyadic_only = false) {
  if (grid_k > kBruteForceMaxCells) {
    throw RegimeError("rm_norm_bruteforce_1d: grid_k must be <= " + std::to_string(kBruteForceMaxCells));
  }
  if (dyadic_only && (grid_k & (grid_k - 1)) != 0) throw RegimeError("dyadic compositions need a power-of-two grid");
  const auto s = detail::interval_scores(f, root, grid_k, params);
  double best = -1.0;
  std::uint32_t best_mask = 0;
  const std::uint32_t count = std::uint32_t{1} << (grid_k - 1);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    // Bit b set means a cut after cell b.
    double acc = 0.0;
    int start = 0;
    bool ok = true;
    for (int b = 0; b < grid_k; ++b) {
      if (b + 1 == grid_k || (mask >> b) & 1u) {
        if (dyadic_only && !detail::is_dyadic_interval(start, b + 1)) {
          ok = false;
          break;
        }
        acc += s[static_cast<std::size_t>(start)][static_cast<std::size_t>(b + 1)];
        start = b + 1;
      }
    }
    if (ok && acc > best) {
      best = acc;
      best_mask = mask;
    }
  }
  BasicNormEstimate<Real> out;
  out.kind = BoundKind::exact;
  out.power_sum = best;
  out.value = std::pow(best, 1.0 / params.p());
  out.formula = dyadic_only ? "exhaustive dyadic compositions" : "exhaustive compositions";
  const Real a = root.lower(0);
  const Real w = root.side() / Real(grid_k);
  int start = 0;
  for (int b = 0; b < grid_k; ++b) {
    if (b + 1 == grid_k || (best_mask >> b) & 1u) {
      if (s[static_cast<std::size_t>(start)][static_cast<std::size_t>(b + 1)] > 0.0) {
        out.certificate.push_back(
            BasicCube<Real>::interval(a + w * Real(start), b + 1 == grid_k ? root.upper(0) : a + w * Real(b + 1)));
      }
      start = b + 1;
    }
  }
  out.trace.push_back({grid_k, out.value});
  return out;
}

/// The same optimum as the brute force, by the O(k^2) interval recursion
/// best[j] = max_i best[i] + score(i, j).
template <class Real>
BasicNormEstimate<Real> rm_norm_grid_dp_1d(const BasicStepFunction<Real>& f, const BasicCube<Real>& root, int grid_k,
                                           const ParamSpace& params) {
  const auto s = detail::interval_scores(f, root, grid_k, params);
  const auto k = static_cast<std::size_t>(grid_k);
  std::vector<double> best(k + 1, 0.0);
  std::vector<std::size_t> from(k + 1, 0);
  for (std::size_t j = 1; j <= k; ++j) {
    best[j] = -1.0;
    for (std::size_t i = 0; i < j; ++i) {
      double v = best[i] + s[i][j];
      if (v > best[j]) {
        best[j] = v;
        from[j] = i;
      }
    }
  }
  BasicNormEstimate<Real> out;
  out.kind = BoundKind::exact;
  out.power_sum = best[k];
  out.value = std::pow(best[k], 1.0 / params.p());
  out.formula = "interval dynamic program";
  const Real a = root.lower(0);
  const Real w = root.side() / Real(grid_k);
  for (std::size_t j = k; j > 0; j = from[j]) {
    std::size_t i = from[j];
    if (s[i][j] > 0.0) {
      out.certificate.push_back(BasicCube<Real>::interval(a + w * Real(i), j == k ? root.upper(0) : a + w * Real(j)));
    }
  }
  std::reverse(out.certificate.begin(), out.certificate.end());
  out.trace.push_back({grid_k, out.value});
  return out;
}

/// ||f||_{R_p(Q0)}: the RM norm with q = 1, alpha = 0 on dyadic families of Q0.
template <class Real>
BasicNormEstimate<Real> riesz_norm(const BasicStepFunction<Real>& f, const BasicCube<Real>& Q0, double p, int depth,
                                   DyadicOptions opt = {}) {
  if (!(p > 1.0) || std::isinf(p)) throw RegimeError("riesz_norm: p must lie in (1, inf)");
  const auto domain = BasicDomain<Real>::cube(Q0);
  return rm_norm_dyadic(f, Q0, depth, ParamSpace(p, 1.0, 0.0), opt, &domain);
}

// ---------------------------------------------------------------------------
// Morrey norm.

struct MorreySearch {
  int depth = 8;
  /// Pairwise bounding cubes are formed for all pairs up to this many
  /// supports, and for neighbors in coordinate order beyond it.
  std::size_t all_pairs_limit = 200;
};

template <class Real>
double morrey_term(const BasicStepFunction<Real>& f, const BasicCube<Real>& Q, double q, double alpha) {
  const double vol = to_double(Q.volume());
  if (std::isinf(q)) return std::pow(vol, -alpha) * max_height_on(f, Q);
  return std::pow(vol, -alpha - 1.0 / q) * std::pow(q_power_integral(f, Q, q), 1.0 / q);
}

/// Lower bound for sup_Q |Q|^{-alpha - 1/q} ||f||_{L^q(Q)} over candidate
/// cubes: the supports, dyadic cubes of the root meeting the support, pairwise
/// and total bounding cubes. Candidates leaving the domain are skipped.
template <class Real>
BasicNormEstimate<Real> morrey_norm_estimate(const BasicStepFunction<Real>& f, const BasicDomain<Real>& domain,
                                             double q, double alpha, const MorreySearch& search = {}) {
  if (!(q >= 1.0) || std::isinf(q)) throw RegimeError("morrey_norm_estimate: q must lie in [1, inf)");
  if (!(alpha >= -1.0 / q && alpha <= 0.0)) throw RegimeError("morrey_norm_estimate: alpha must lie in [-1/q, 0]");
  if (domain.dim() != f.dim()) throw GeometryError("morrey_norm_estimate: domain dimension mismatch");
  BasicNormEstimate<Real> out;
  out.kind = BoundKind::lower;
  out.formula = "max over support, dyadic and merged candidate cubes";
  if (f.empty()) {
    out.trace.push_back({0, 0.0});
    return out;
  }

  double best = 0.0;
  std::optional<BasicCube<Real>> arg;
  long considered = 0;
  auto consider = [&](const BasicCube<Real>& Q) {
    if (!domain.contains(Q)) return;
    ++considered;
    double v = morrey_term(f, Q, q, alpha);
    if (v > best) {
      best = v;
      arg = Q;
    }
  };
  auto record = [&] { out.trace.push_back({considered, best}); };

  const auto supports = f.supports();
  for (const auto& s : supports) consider(s);
  record();

  std::optional<BasicCube<Real>> root = domain.bounding();
  if (!root) root = bounding_cube(std::span<const BasicCube<Real>>(supports));
  std::vector<BasicCube<Real>> frontier{*root};
  for (int d = 0; d <= search.depth && !frontier.empty(); ++d) {
    std::vector<BasicCube<Real>> next;
    for (const auto& c : frontier) {
      bool meets = false;
      for (const auto& s : supports) {
        if (intersection_volume(c, s) > 0) {
          meets = true;
          break;
        }
      }
      if (!meets) continue;
      consider(c);
      if (d < search.depth) {
        for (auto& ch : dyadic_children(c)) next.push_back(std::move(ch));
      }
    }
    frontier = std::move(next);
  }
  record();

  if (supports.size() <= search.all_pairs_limit) {
    for (std::size_t i = 0; i < supports.size(); ++i) {
      for (std::size_t j = i + 1; j < supports.size(); ++j) consider(bounding_cube(supports[i], supports[j]));
    }
  } else {
    auto sorted = supports;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.lower(0) < b.lower(0); });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) consider(bounding_cube(sorted[i], sorted[i + 1]));
  }
  consider(*bounding_cube(std::span<const BasicCube<Real>>(supports)));
  record();

  out.value = best;
  out.power_sum = best;
  if (arg) out.certificate.push_back(*arg);
  return out;
}

/// RM norm lower bound on a domain: the dyadic program on the domain cube (or
/// on the support's bounding cube for R^n); p = inf is the Morrey norm.
template <class Real>
BasicNormEstimate<Real> rm_norm(const BasicStepFunction<Real>& f, const BasicDomain<Real>& domain,
                                const ParamSpace& params, int depth, const DyadicOptions& opt = {},
                                std::optional<BasicCube<Real>> root = std::nullopt) {
  if (params.p_infinite()) return morrey_norm_estimate(f, domain, params.q(), params.alpha(), MorreySearch{depth});
  if (!root) root = domain.bounding();
  if (!root) {
    auto b = f.support_bound();
    if (!b) {
      BasicNormEstimate<Real> zero;
      zero.kind = BoundKind::exact;
      zero.formula = "zero function";
      zero.trace.push_back({0, 0.0});
      return zero;
    }
    root = *b;
  }
  const BasicDomain<Real>* dp = domain.kind() == DomainKind::cube ? &domain : nullptr;
  return rm_norm_dyadic(f, *root, depth, params, opt, dp);
}

}  // namespace rmlab
