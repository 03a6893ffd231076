#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/next.hpp>

#include <boost/container/small_vector.hpp>

#include "rmlab/errors.hpp"
#include "rmlab/scalar.hpp"

namespace rmlab {

template <class Real>
using Coords = boost::container::small_vector<Real, 4>;

// Axis-aligned closed cube [lower, lower + side]^n. Interior disjointness
// compares the open boxes, so families may share faces.
template <class Real = double>
class BasicCube {
 public:
  using scalar_type = Real;

  BasicCube(Coords<Real> lower, Real side) : lower_(std::move(lower)), side_(side) {
    using std::isfinite;
    if (lower_.empty()) throw GeometryError("cube dimension must be positive");
    if (!(side_ > 0) || !isfinite(side_)) throw GeometryError("cube side must be positive and finite");
    for (const auto& x : lower_) {
      if (!isfinite(x)) throw GeometryError("cube coordinates must be finite");
    }
  }

  BasicCube(std::initializer_list<Real> lower, Real side) : BasicCube(Coords<Real>(lower), side) {}

  /// One-dimensional cube [a, b].
  /// [a, b], with the side shaved by rounding steps until a + side <= b so
  /// intervals built from shared endpoints never overlap.
  static BasicCube interval(Real a, Real b) {
    Real side = b - a;
    while (side > 0 && a + side > b) side = boost::math::float_prior(side);
    return BasicCube({a}, side);
  }

  /// Cube of the given side whose center is (c, ..., c).
  static BasicCube diagonal(int dim, Real center, Real side) {
    return BasicCube(Coords<Real>(static_cast<std::size_t>(dim), center - side / 2), side);
  }

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  const Coords<Real>& lower() const noexcept { return lower_; }
  Real lower(int axis) const { return lower_[static_cast<std::size_t>(axis)]; }
  Real upper(int axis) const { return lower_[static_cast<std::size_t>(axis)] + side_; }
  Real center(int axis) const { return lower_[static_cast<std::size_t>(axis)] + side_ / 2; }
  Real side() const noexcept { return side_; }

  Real volume() const {
    Real v = 1;
    for (int i = 0; i < dim(); ++i) v *= side_;
    return v;
  }

  /// Closed containment of another cube.
  bool contains(const BasicCube& other) const {
    check_same_dim(*this, other);
    for (int i = 0; i < dim(); ++i) {
      if (other.lower(i) < lower(i) || other.upper(i) > upper(i)) return false;
    }
    return true;
  }

  bool contains_point(std::span<const Real> x) const {
    if (static_cast<int>(x.size()) != dim()) throw GeometryError("point dimension mismatch");
    for (int i = 0; i < dim(); ++i) {
      if (x[static_cast<std::size_t>(i)] < lower(i) || x[static_cast<std::size_t>(i)] > upper(i)) return false;
    }
    return true;
  }

  BasicCube shifted(Real delta) const {
    Coords<Real> lo = lower_;
    for (auto& x : lo) x += delta;
    return BasicCube(std::move(lo), side_);
  }

  template <class Other>
  BasicCube<Other> convert() const {
    Coords<Other> lo;
    for (const auto& x : lower_) lo.push_back(static_cast<Other>(x));
    return BasicCube<Other>(std::move(lo), static_cast<Other>(side_));
  }

  friend bool operator==(const BasicCube& a, const BasicCube& b) {
    return a.side_ == b.side_ && a.lower_ == b.lower_;
  }

  friend void check_same_dim(const BasicCube& a, const BasicCube& b) {
    if (a.dim() != b.dim()) {
      throw GeometryError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
  }

 private:
  Coords<Real> lower_;
  Real side_;
};

using Cube = BasicCube<double>;
using QCube = BasicCube<quad>;

template <class Real = double>
using BasicCubeFamily = std::vector<BasicCube<Real>>;
using CubeFamily = BasicCubeFamily<double>;

template <class Real>
Real volume(const BasicCube<Real>& c) {
  return c.volume();
}

/// True iff the open boxes do not intersect.
template <class Real>
bool interiors_disjoint(const BasicCube<Real>& a, const BasicCube<Real>& b) {
  check_same_dim(a, b);
  for (int i = 0; i < a.dim(); ++i) {
    if (a.upper(i) <= b.lower(i) || b.upper(i) <= a.lower(i)) return true;
  }
  return false;
}

/// Measure of the intersection of the two closed cubes.
template <class Real>
Real intersection_volume(const BasicCube<Real>& a, const BasicCube<Real>& b) {
  check_same_dim(a, b);
  Real v = 1;
  for (int i = 0; i < a.dim(); ++i) {
    Real lo = a.lower(i) > b.lower(i) ? a.lower(i) : b.lower(i);
    Real hi = a.upper(i) < b.upper(i) ? a.upper(i) : b.upper(i);
    if (!(hi > lo)) return Real(0);
    v *= hi - lo;
  }
  return v;
}

/// Euclidean distance inf{|x - y|} between the closed boxes.
template <class Real>
Real box_distance(const BasicCube<Real>& a, const BasicCube<Real>& b) {
  using std::sqrt;
  check_same_dim(a, b);
  Real sum = 0;
  for (int i = 0; i < a.dim(); ++i) {
    Real gap = 0;
    if (a.upper(i) < b.lower(i)) {
      gap = b.lower(i) - a.upper(i);
    } else if (b.upper(i) < a.lower(i)) {
      gap = a.lower(i) - b.upper(i);
    }
    sum += gap * gap;
  }
  return sqrt(sum);
}

/// sup over x in `outer` of dist(x, inner), attained at a vertex of `outer`.
template <class Real>
Real farthest_point_distance(const BasicCube<Real>& outer, const BasicCube<Real>& inner) {
  using std::sqrt;
  check_same_dim(outer, inner);
  Real sum = 0;
  for (int i = 0; i < outer.dim(); ++i) {
    Real left = inner.lower(i) - outer.lower(i);
    Real right = outer.upper(i) - inner.upper(i);
    Real g = left > right ? left : right;
    if (g > 0) sum += g * g;
  }
  return sqrt(sum);
}

/// The 2^n half-side subcubes tiling c, ordered by the binary index of the
/// corner (bit i set means upper half along axis i).
template <class Real>
BasicCubeFamily<Real> dyadic_children(const BasicCube<Real>& c) {
  const int n = c.dim();
  const Real half = c.side() / 2;
  BasicCubeFamily<Real> out;
  out.reserve(std::size_t{1} << n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Coords<Real> lo = c.lower();
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) lo[static_cast<std::size_t>(i)] += half;
    }
    out.emplace_back(std::move(lo), half);
  }
  return out;
}

/// Pairwise interior disjointness by a sweep along the first axis.
template <class Real>
bool pairwise_interiors_disjoint(std::span<const BasicCube<Real>> family) {
  if (family.empty()) return true;
  const int n = family.front().dim();
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& c : family) {
    if (c.dim() != n) throw GeometryError("family mixes dimensions");
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return family[a].lower(0) < family[b].lower(0); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& a = family[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& b = family[order[j]];
      if (!(b.lower(0) < a.upper(0))) break;
      if (!interiors_disjoint(a, b)) return false;
    }
  }
  return true;
}

template <class Real>
bool pairwise_interiors_disjoint(const BasicCubeFamily<Real>& family) {
  return pairwise_interiors_disjoint(std::span<const BasicCube<Real>>(family));
}

/// Smallest cube containing both (anchored at the componentwise minimum).
template <class Real>
BasicCube<Real> bounding_cube(const BasicCube<Real>& a, const BasicCube<Real>& b) {
  check_same_dim(a, b);
  Coords<Real> lo;
  Real side = 0;
  for (int i = 0; i < a.dim(); ++i) {
    Real l = a.lower(i) < b.lower(i) ? a.lower(i) : b.lower(i);
    Real u = a.upper(i) > b.upper(i) ? a.upper(i) : b.upper(i);
    lo.push_back(l);
    if (u - l > side) side = u - l;
  }
  return BasicCube<Real>(std::move(lo), side);
}

template <class Real>
std::optional<BasicCube<Real>> bounding_cube(std::span<const BasicCube<Real>> family) {
  if (family.empty()) return std::nullopt;
  BasicCube<Real> acc = family.front();
  for (const auto& c : family.subspan(1)) acc = bounding_cube(acc, c);
  return acc;
}

enum class DomainKind { whole_space, cube };

/// The ambient set X: all of R^n or a fixed cube Q0.
template <class Real = double>
class BasicDomain {
 public:
  static BasicDomain whole_space(int dim) { return BasicDomain(dim, std::nullopt); }
  static BasicDomain cube(BasicCube<Real> q0) {
    int d = q0.dim();
    return BasicDomain(d, std::move(q0));
  }

  DomainKind kind() const noexcept { return cube_ ? DomainKind::cube : DomainKind::whole_space; }
  int dim() const noexcept { return dim_; }
  const std::optional<BasicCube<Real>>& bounding() const noexcept { return cube_; }

  bool contains(const BasicCube<Real>& c) const {
    if (c.dim() != dim_) throw GeometryError("cube dimension does not match domain");
    return !cube_ || cube_->contains(c);
  }

 private:
  BasicDomain(int dim, std::optional<BasicCube<Real>> c) : dim_(dim), cube_(std::move(c)) {
    if (dim_ < 1) throw GeometryError("domain dimension must be positive");
  }

  int dim_;
  std::optional<BasicCube<Real>> cube_;
};

using Domain = BasicDomain<double>;

/// The N^n - 1 cubes of side N^i tiling A_{i+1} \ A_i, with A_i = (0, N^i]^n:
/// the grid of A_{i+1} without the cell at the origin corner.
inline CubeFamily ring_subdivision(int i, int N, int n) {
  if (n < 1) throw GeometryError("dimension must be positive");
  if (N < 2 || !(static_cast<double>(N) > std::sqrt(static_cast<double>(n)))) {
    throw RegimeError("ring_subdivision: need N >= 2 and N > sqrt(n), got N=" + std::to_string(N));
  }
  const double side = std::pow(static_cast<double>(N), i);
  std::size_t cells = 1;
  for (int k = 0; k < n; ++k) cells *= static_cast<std::size_t>(N);
  CubeFamily out;
  out.reserve(cells - 1);
  for (std::size_t idx = 1; idx < cells; ++idx) {
    Coords<double> lo;
    std::size_t rest = idx;
    for (int k = 0; k < n; ++k) {
      lo.push_back(static_cast<double>(rest % static_cast<std::size_t>(N)) * side);
      rest /= static_cast<std::size_t>(N);
    }
    out.emplace_back(std::move(lo), side);
  }
  return out;
}

/// Splits [-t_outer, -t_inner] and [t_inner, t_outer] into `parts_per_side`
/// equal intervals each (one-dimensional shells of Q0 = [-1, 1]).
inline CubeFamily shell_partition_1d(double t_outer, double t_inner, int parts_per_side) {
  if (!(t_inner > 0.0) || !(t_inner < t_outer)) {
    throw GeometryError("shell_partition_1d: need 0 < t_inner < t_outer");
  }
  if (parts_per_side < 1) throw GeometryError("shell_partition_1d: parts_per_side must be >= 1");
  const double width = (t_outer - t_inner) / parts_per_side;
  CubeFamily out;
  out.reserve(2 * static_cast<std::size_t>(parts_per_side));
  // Each piece starts at the computed upper end of the previous one, so
  // rounding cannot make neighbours overlap.
  auto side = [&](double from, double to) {
    double a = from;
    for (int k = 0; k < parts_per_side; ++k) {
      const double b = (k + 1 == parts_per_side) ? to : from + (k + 1) * width;
      out.push_back(Cube::interval(a, std::max(b, a)));
      a = out.back().upper(0);
    }
  };
  side(-t_outer, -t_inner);
  side(t_inner, t_outer);
  return out;
}

}  // namespace rmlab
