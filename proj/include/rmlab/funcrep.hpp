#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmlab/errors.hpp"
#include "rmlab/estimate.hpp"
#include "rmlab/geometry.hpp"
#include "rmlab/params.hpp"
#include "rmlab/quadrature.hpp"
#include "rmlab/scalar.hpp"

namespace rmlab {

template <class Real = double>
struct BasicPiece {
  BasicCube<Real> support;
  double height = 0.0;
};

/// f = sum_i h_i 1_{I_i} with interior-disjoint supports and h_i >= 0.
template <class Real = double>
class BasicStepFunction {
 public:
  using Piece = BasicPiece<Real>;
  using scalar_type = Real;

  explicit BasicStepFunction(int dim) : dim_(dim) {
    if (dim < 1) throw GeometryError("step function dimension must be positive");
  }

  BasicStepFunction(int dim, std::vector<Piece> pieces) : dim_(dim), pieces_(std::move(pieces)) {
    if (dim < 1) throw GeometryError("step function dimension must be positive");
    BasicCubeFamily<Real> supports;
    supports.reserve(pieces_.size());
    for (const auto& pc : pieces_) {
      if (pc.support.dim() != dim_) throw GeometryError("piece dimension does not match step function");
      if (!(pc.height >= 0.0) || !std::isfinite(pc.height)) {
        throw GeometryError("step heights must be finite and nonnegative");
      }
      supports.push_back(pc.support);
    }
    if (!pairwise_interiors_disjoint(supports)) throw GeometryError("step function supports overlap");
  }

  int dim() const noexcept { return dim_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  std::size_t size() const noexcept { return pieces_.size(); }
  bool empty() const noexcept { return pieces_.empty(); }

  BasicCubeFamily<Real> supports() const {
    BasicCubeFamily<Real> out;
    out.reserve(pieces_.size());
    for (const auto& pc : pieces_) out.push_back(pc.support);
    return out;
  }

  std::optional<BasicCube<Real>> support_bound() const {
    auto s = supports();
    return bounding_cube(std::span<const BasicCube<Real>>(s));
  }

  /// Same function with every height multiplied by c >= 0.
  BasicStepFunction scaled(double c) const {
    std::vector<Piece> out = pieces_;
    for (auto& pc : out) pc.height *= c;
    return BasicStepFunction(dim_, std::move(out));
  }

 private:
  int dim_;
  std::vector<Piece> pieces_;
};

using StepFunction = BasicStepFunction<double>;
using Piece = BasicPiece<double>;

/// Pointwise value; on shared faces the first listed piece wins.
template <class Real>
double evaluate(const BasicStepFunction<Real>& f, std::span<const Real> x) {
  for (const auto& pc : f.pieces()) {
    if (pc.support.contains_point(x)) return pc.height;
  }
  return 0.0;
}

/// sum_i h_i^q |Q cap I_i| for finite q.
template <class Real>
double q_power_integral(const BasicStepFunction<Real>& f, const BasicCube<Real>& Q, double q) {
  double acc = 0.0;
  for (const auto& pc : f.pieces()) {
    if (pc.height == 0.0) continue;
    Real v = intersection_volume(Q, pc.support);
    if (v > 0) acc += std::pow(pc.height, q) * to_double(v);
  }
  return acc;
}

/// Largest height met on a set of positive measure inside Q.
template <class Real>
double max_height_on(const BasicStepFunction<Real>& f, const BasicCube<Real>& Q) {
  double m = 0.0;
  for (const auto& pc : f.pieces()) {
    if (pc.height > m && intersection_volume(Q, pc.support) > 0) m = pc.height;
  }
  return m;
}

template <class Real>
double lq_norm_on_cube(const BasicStepFunction<Real>& f, const BasicCube<Real>& Q, double q) {
  if (!(q >= 1.0)) throw RegimeError("lq_norm_on_cube: q must be >= 1");
  if (std::isinf(q)) return max_height_on(f, Q);
  return std::pow(q_power_integral(f, Q, q), 1.0 / q);
}

namespace detail {

template <class Real>
double piece_mass_in_domain(const BasicPiece<Real>& pc, const BasicDomain<Real>& domain) {
  if (const auto& c = domain.bounding()) return to_double(intersection_volume(pc.support, *c));
  return to_double(pc.support.volume());
}

}  // namespace detail

/// ||f||_{L^theta(X)}. Exact for step functions. The trace lists the norm of
/// the first k pieces for each k in `truncations` (pieces are taken in list
/// order, which for constructions is generation order), ending with all pieces.
template <class Real>
NormEstimate lebesgue_norm(const BasicStepFunction<Real>& f, const BasicDomain<Real>& domain, double theta,
                           std::span<const std::size_t> truncations = {}) {
  if (!(theta >= 1.0)) throw RegimeError("lebesgue_norm: exponent must be >= 1");
  if (domain.dim() != f.dim()) throw GeometryError("lebesgue_norm: domain dimension mismatch");
  NormEstimate out;
  out.kind = BoundKind::exact;
  out.formula = std::isinf(theta) ? "max height" : "(sum h^theta |I cap X|)^(1/theta)";
  std::vector<std::size_t> cuts(truncations.begin(), truncations.end());
  cuts.push_back(f.size());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double acc = 0.0;
  std::size_t next = 0;
  const auto& pcs = f.pieces();
  auto emit = [&](std::size_t k) {
    double v = std::isinf(theta) ? acc : std::pow(acc, 1.0 / theta);
    out.trace.push_back({static_cast<long>(k), v});
  };
  for (std::size_t k = 0; k <= pcs.size(); ++k) {
    while (next < cuts.size() && cuts[next] == k) {
      emit(k);
      ++next;
    }
    if (k == pcs.size()) break;
    double mass = detail::piece_mass_in_domain(pcs[k], domain);
    if (mass <= 0.0) continue;
    if (std::isinf(theta)) {
      acc = std::max(acc, pcs[k].height);
    } else {
      acc += std::pow(pcs[k].height, theta) * mass;
    }
  }
  out.value = out.trace.back().value;
  out.power_sum = std::isinf(theta) ? out.value : acc;
  return out;
}

/// |{x : f(x) > lambda}|.
template <class Real>
double distribution_measure(const BasicStepFunction<Real>& f, double lambda) {
  if (!(lambda >= 0.0)) throw RegimeError("distribution_measure: lambda must be >= 0");
  double acc = 0.0;
  for (const auto& pc : f.pieces()) {
    if (pc.height > lambda) acc += to_double(pc.support.volume());
  }
  return acc;
}

/// sup_lambda lambda |{f > lambda}|^{1/p - alpha}; attained as lambda rises to
/// a height value, so the sup runs over the distinct heights.
template <class Real>
double weak_norm(const BasicStepFunction<Real>& f, double p, double alpha) {
  const double e = (std::isinf(p) ? 0.0 : 1.0 / p) - alpha;
  if (!(e > 0.0)) throw RegimeError("weak_norm: requires 1/p - alpha > 0");
  std::vector<std::pair<double, double>> hv;
  for (const auto& pc : f.pieces()) {
    if (pc.height > 0.0) hv.emplace_back(pc.height, to_double(pc.support.volume()));
  }
  std::sort(hv.begin(), hv.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = 0.0;
  double vol = 0.0;
  for (std::size_t i = 0; i < hv.size(); ++i) {
    vol += hv[i].second;
    if (i + 1 < hv.size() && hv[i + 1].first == hv[i].first) continue;
    best = std::max(best, hv[i].first * std::pow(vol, e));
  }
  return best;
}

/// Measure of the unit sphere restricted to the closed positive orthant.
inline double orthant_sphere_measure(int n) {
  if (n < 1) throw GeometryError("dimension must be positive");
  const double full = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  return full / std::pow(2.0, n);
}

/// Integral of |x|^{s_q} over {r_in < |x| < r_out} in the positive orthant.
/// For s_q + n = 0 the logarithmic form is returned.
inline double shell_integral_radial(double s_q, double r_in, double r_out, int n) {
  if (!(r_in > 0.0) || !(r_in < r_out)) throw GeometryError("shell_integral_radial: need 0 < r_in < r_out");
  const double e = s_q + n;
  const double S = orthant_sphere_measure(n);
  if (e == 0.0) return S * std::log(r_out / r_in);
  return S * (std::pow(r_out, e) - std::pow(r_in, e)) / e;
}

enum class RadialRegion { orthant, inside_corner, outside_corner };

/// |x|^s on the open positive orthant, optionally restricted to the corner
/// cube A = (0, m]^n or to its complement in the orthant.
class RadialPower {
 public:
  RadialPower(double s, int n, RadialRegion region = RadialRegion::orthant, double corner = 1.0)
      : s_(s), n_(n), region_(region), corner_(corner) {
    if (n < 1) throw GeometryError("dimension must be positive");
    if (!std::isfinite(s)) throw RegimeError("radial exponent must be finite");
    if (region != RadialRegion::orthant && !(corner > 0.0)) throw GeometryError("corner side must be positive");
  }

  double exponent() const noexcept { return s_; }
  int dim() const noexcept { return n_; }
  RadialRegion region() const noexcept { return region_; }
  double corner() const noexcept { return corner_; }

  RadialPower restricted(RadialRegion region, double corner) const { return RadialPower(s_, n_, region, corner); }

  bool in_support(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw GeometryError("point dimension mismatch");
    bool inside = true;
    for (double v : x) {
      if (!(v > 0.0)) return false;
      if (v > corner_) inside = false;
    }
    switch (region_) {
      case RadialRegion::orthant:
        return true;
      case RadialRegion::inside_corner:
        return inside;
      case RadialRegion::outside_corner:
        return !inside;
    }
    return false;
  }

  /// Disjoint boxes whose union is Q intersected with the support closure.
  std::vector<Box> support_boxes(const Cube& Q) const {
    if (Q.dim() != n_) throw GeometryError("cube dimension does not match function");
    Box clip;
    for (int i = 0; i < n_; ++i) {
      clip.lo.push_back(std::max(Q.lower(i), 0.0));
      clip.hi.push_back(std::max(Q.upper(i), 0.0));
    }
    std::vector<Box> out;
    if (clip.empty()) return out;
    if (region_ == RadialRegion::orthant) {
      out.push_back(clip);
    } else if (region_ == RadialRegion::inside_corner) {
      for (auto& h : clip.hi) h = std::min(h, corner_);
      for (auto& l : clip.lo) l = std::min(l, corner_);
      if (!clip.empty()) out.push_back(clip);
    } else {
      for (int k = 0; k < n_; ++k) {
        Box b;
        for (int j = 0; j < n_; ++j) {
          double lo = clip.lo[static_cast<std::size_t>(j)];
          double hi = clip.hi[static_cast<std::size_t>(j)];
          if (j < k) {
            hi = std::min(hi, corner_);
          } else if (j == k) {
            lo = std::max(lo, corner_);
          }
          b.lo.push_back(lo);
          b.hi.push_back(std::max(hi, lo));
        }
        if (!b.empty()) out.push_back(b);
      }
    }
    return out;
  }

 private:
  double s_;
  int n_;
  RadialRegion region_;
  double corner_;
};

inline double evaluate(const RadialPower& f, std::span<const double> x) {
  if (!f.in_support(x)) return 0.0;
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::pow(r2, f.exponent() / 2.0);
}

/// integral over Q of |f|^q, q finite.
inline double q_power_integral(const RadialPower& f, const Cube& Q, double q, const QuadratureOptions& opt = {}) {
  double acc = 0.0;
  for (const auto& b : f.support_boxes(Q)) acc += radial_power_box_integral(f.exponent() * q, b, opt).value;
  return acc;
}

inline double lq_norm_on_cube(const RadialPower& f, const Cube& Q, double q, const QuadratureOptions& opt = {}) {
  if (!(q >= 1.0)) throw RegimeError("lq_norm_on_cube: q must be >= 1");
  if (std::isinf(q)) {
    // Monotone in |x|: the sup sits at the nearest (s < 0) or farthest corner.
    double best = 0.0;
    for (const auto& b : f.support_boxes(Q)) {
      const auto& corner = f.exponent() < 0.0 ? b.lo : b.hi;
      double r2 = 0.0;
      for (double v : corner) r2 += v * v;
      if (r2 == 0.0 && f.exponent() < 0.0) return kInf;
      best = std::max(best, std::pow(r2, f.exponent() / 2.0));
    }
    return best;
  }
  return std::pow(q_power_integral(f, Q, q, opt), 1.0 / q);
}

}  // namespace rmlab
