#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rmlab/errors.hpp"
#include "rmlab/geometry.hpp"

namespace rmlab {

/// Axis-aligned box with independent extents per axis.
struct Box {
  Coords<double> lo;
  Coords<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool empty() const {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!(hi[i] > lo[i])) return true;
    }
    return false;
  }
  static Box from_cube(const Cube& c) {
    Box b;
    for (int i = 0; i < c.dim(); ++i) {
      b.lo.push_back(c.lower(i));
      b.hi.push_back(c.upper(i));
    }
    return b;
  }
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  unsigned max_depth = 18;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

using Point = Coords<double>;

/// Nested adaptive Gauss-Kronrod over axes [axis, n).
inline QuadratureResult integrate_axes(const std::function<double(const Point&)>& f, const Box& box, Point& x,
                                       int axis, double tol, unsigned max_depth) {
  using boost::math::quadrature::gauss_kronrod;
  const int n = box.dim();
  double inner_err = 0.0;
  auto g = [&](double t) {
    x[static_cast<std::size_t>(axis)] = t;
    if (axis + 1 == n) return f(x);
    QuadratureResult r = integrate_axes(f, box, x, axis + 1, tol * 0.1, max_depth);
    inner_err = std::max(inner_err, std::abs(r.error));
    return r.value;
  };
  double err = 0.0;
  double l1 = 0.0;
  const auto a = box.lo[static_cast<std::size_t>(axis)];
  const auto b = box.hi[static_cast<std::size_t>(axis)];
  double v = gauss_kronrod<double, 15>::integrate(g, a, b, max_depth, tol, &err, &l1);
  return {v, err + inner_err * (b - a)};
}

}  // namespace detail

/// Integral of a smooth integrand over a box; throws QuadratureError when the
/// error estimate exceeds rel_tol relative to the result.
inline QuadratureResult integrate_box(const std::function<double(const Coords<double>&)>& f, const Box& box,
                                      const QuadratureOptions& opt = {}) {
  if (box.empty()) return {};
  detail::Point x(box.lo);
  QuadratureResult r = detail::integrate_axes(f, box, x, 0, opt.rel_tol * 0.01, opt.max_depth);
  const double scale = std::max(std::abs(r.value), std::numeric_limits<double>::min());
  if (!std::isfinite(r.value) || r.error > opt.rel_tol * scale) {
    throw QuadratureError("adaptive quadrature did not reach relative tolerance " + std::to_string(opt.rel_tol) +
                              " (achieved " + std::to_string(r.error / scale) + ")",
                          r.value, r.error);
  }
  return r;
}

/// Integral of |x|^s over a box in the closed positive orthant. A box whose
/// lower corner is the origin is split into the corner cube [0, m]^n, handled
/// by self-similarity, plus bounded remainders.
inline QuadratureResult radial_power_box_integral(double s, const Box& box, const QuadratureOptions& opt = {}) {
  if (box.empty()) return {};
  const int n = box.dim();
  for (int i = 0; i < n; ++i) {
    if (box.lo[static_cast<std::size_t>(i)] < 0.0) throw GeometryError("radial integral box leaves the orthant");
  }
  auto integrand = [s](const Coords<double>& x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::pow(r2, s / 2.0);
  };
  bool at_origin = std::all_of(box.lo.begin(), box.lo.end(), [](double v) { return v == 0.0; });
  if (!at_origin) return integrate_box(integrand, box, opt);

  const double e = s + n;
  if (!(e > 0.0)) {
    throw QuadratureError("|x|^" + std::to_string(s) + " is not integrable at the origin in dimension " +
                              std::to_string(n),
                          std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  }
  // Unit corner cube: I = A + 2^{-e} I, A the integral over [0,1]^n minus [0,1/2]^n.
  QuadratureResult A;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Box part;
    for (int i = 0; i < n; ++i) {
      bool upper = mask & (1u << i);
      part.lo.push_back(upper ? 0.5 : 0.0);
      part.hi.push_back(upper ? 1.0 : 0.5);
    }
    QuadratureResult r = integrate_box(integrand, part, opt);
    A.value += r.value;
    A.error += r.error;
  }
  const double m = *std::min_element(box.hi.begin(), box.hi.end());
  const double factor = std::pow(m, e) / (1.0 - std::pow(2.0, -e));
  QuadratureResult out{A.value * factor, A.error * factor};

  // Remainder [0,hi] \ [0,m]^n: first axis k with x_k > m.
  for (int k = 0; k < n; ++k) {
    if (!(box.hi[static_cast<std::size_t>(k)] > m)) continue;
    Box part;
    for (int j = 0; j < n; ++j) {
      if (j < k) {
        part.lo.push_back(0.0);
        part.hi.push_back(m);
      } else if (j == k) {
        part.lo.push_back(m);
        part.hi.push_back(box.hi[static_cast<std::size_t>(j)]);
      } else {
        part.lo.push_back(0.0);
        part.hi.push_back(box.hi[static_cast<std::size_t>(j)]);
      }
    }
    QuadratureResult r = integrate_box(integrand, part, opt);
    out.value += r.value;
    out.error += r.error;
  }
  return out;
}

}  // namespace rmlab
