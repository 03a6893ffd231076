#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rmlab/errors.hpp"
#include "rmlab/funcrep.hpp"
#include "rmlab/geometry.hpp"
#include "rmlab/params.hpp"
#include "rmlab/scalar.hpp"
#include "rmlab/series.hpp"

namespace rmlab {

// ---------------------------------------------------------------------------
// Sparse family P_l = [2^l, 2^l + l^{-1/n}]^n.

/// Largest l with 2^l finite in double precision.
inline constexpr int kSparseMaxL = 1022;

inline CubeFamily sparse_family(int L, int n = 1) {
  if (L < 1) throw RegimeError("sparse_family: L must be >= 1");
  if (L > kSparseMaxL) throw RegimeError("sparse_family: L exceeds " + std::to_string(kSparseMaxL));
  if (n < 1) throw GeometryError("dimension must be positive");
  CubeFamily out;
  out.reserve(static_cast<std::size_t>(L));
  for (int l = 1; l <= L; ++l) {
    const double corner = std::ldexp(1.0, l);
    const double side = std::pow(static_cast<double>(l), -1.0 / n);
    out.emplace_back(Coords<double>(static_cast<std::size_t>(n), corner), side);
  }
  return out;
}

inline StepFunction sparse_function(int L, int n = 1) {
  std::vector<Piece> pcs;
  for (auto& c : sparse_family(L, n)) pcs.push_back({std::move(c), 1.0});
  return StepFunction(n, std::move(pcs));
}

// ---------------------------------------------------------------------------
// Descendant tree on a cube.

/// (2^{1/2n} + 1) / (2^{1/2n} - 1): the ratio bounding D_i by d_i.
inline double tree_ratio_constant(int n) {
  const double r = std::pow(2.0, 1.0 / (2.0 * n));
  return (r + 1.0) / (r - 1.0);
}

/// Left side of the gap criterion 1 - C 2^{-(2i+3)/(2n)}; the tree gaps
/// exceed d_i / 2 wherever it is > 1/2.
inline double gap_criterion(int i, int n, double ratio) {
  return 1.0 - ratio * std::pow(2.0, -(2.0 * i + 3.0) / (2.0 * n));
}

/// Smallest N0 >= 0 with gap_criterion(i) > 1/2 for every i > N0. The
/// criterion increases with i, so the first passing index fixes N0.
inline int find_N0(int n, double ratio) {
  if (n < 1) throw GeometryError("dimension must be positive");
  for (int i = 0; i < 100000; ++i) {
    if (gap_criterion(i, n, ratio) > 0.5) return std::max(i - 1, 0);
  }
  throw RegimeError("find_N0: criterion never satisfied");
}

inline int find_N0(int n) { return find_N0(n, tree_ratio_constant(n)); }

template <class Real>
Real tree_length(int i, int n) {
  using std::pow;
  return pow(Real(2), -Real((i + 1) * (i + 1)) / Real(2 * n));
}

/// sqrt(n) * sum_{k >= i} (d_k + l_{k+1}). Terms decay super-geometrically;
/// summation stops when a geometric bound on the remainder is below rel_tol
/// of the running sum, or after max_terms terms.
template <class Real, class DistFn, class LenFn>
Real descendant_radius(int i, DistFn&& dist, LenFn&& len, int n, double rel_tol = 1e-14, int max_terms = 4096,
                       int* terms_used = nullptr) {
  using std::sqrt;
  Real acc = 0;
  Real prev = -1;
  int used = 0;
  for (int k = i; used < max_terms; ++k, ++used) {
    Real term = Real(dist(k)) + Real(len(k + 1));
    acc += term;
    if (prev > 0) {
      Real ratio = term / prev;
      if (ratio < 1) {
        Real tail = term * ratio / (1 - ratio);
        if (tail <= Real(rel_tol) * acc) {
          ++used;
          break;
        }
      }
    }
    prev = term;
  }
  if (terms_used) *terms_used = used;
  return acc * sqrt(Real(n));
}

/// Full state of the diagonal descendant tree.
template <class Real = double>
struct TreeConstruction {
  int n = 1;
  int depth = 0;
  ParamSpace params{2.0, 1.0, -0.25};
  int N0 = 0;
  std::vector<Real> l;          // l_i, i = 0..depth
  std::vector<Real> d_raw;      // d_i before modification
  std::vector<Real> d_hat;      // modified distances
  std::vector<Real> R_hat;      // per-axis radius sum_{k>=i}(d^_k + l_{k+1}), i = 0..depth+1
  std::vector<Real> D_hat;      // sqrt(n) * R_hat
  std::vector<Real> delta_hat;  // sqrt(n) (d^_i - R^_{i+1})
  std::vector<double> h;        // heights
  Real L0 = 0;
  std::vector<BasicCubeFamily<Real>> levels;
  int radius_terms = 0;  // terms used for the far-tail radius sum

  BasicCube<Real> domain_cube() const { return BasicCube<Real>::diagonal(n, Real(0), L0); }

  std::size_t cube_count() const {
    std::size_t c = 0;
    for (const auto& lv : levels) c += lv.size();
    return c;
  }
};

/// Modified distances for i <= N0: d^_i := 2 R^_{i+1} from i = N0 down to 0.
/// Returns the per-axis radii R^_0..R^_{last+1} alongside.
template <class Real>
std::vector<Real> modify_distances(int N0, int last, int n, std::vector<Real>* radii = nullptr,
                                   int* terms_used = nullptr) {
  const int top = std::max(last, N0) + 1;
  auto raw = [n](int k) { return tree_length<Real>(k, n); };
  std::vector<Real> d(static_cast<std::size_t>(top + 1));
  std::vector<Real> R(static_cast<std::size_t>(top + 2));
  for (int k = 0; k <= top; ++k) d[static_cast<std::size_t>(k)] = raw(k);
  using std::sqrt;
  R[static_cast<std::size_t>(top + 1)] =
      descendant_radius<Real>(top + 1, raw, raw, n, 1e-30, 4096, terms_used) / sqrt(Real(n));
  for (int k = top; k >= 0; --k) {
    auto uk = static_cast<std::size_t>(k);
    if (k <= N0) d[uk] = 2 * R[uk + 1];
    R[uk] = d[uk] + raw(k + 1) + R[uk + 1];
  }
  d.resize(static_cast<std::size_t>(last + 1));
  if (radii) {
    R.resize(static_cast<std::size_t>(last + 2));
    *radii = std::move(R);
  }
  return d;
}

/// Builds the tree to the given depth. Level 0 is the cube of side l_0
/// centered at the origin; each level-(i-1) cube with center c spawns
/// children centered at c -+ (l_{i-1}/2 + d^_{i-1} + l_i/2) on every axis.
template <class Real = double>
TreeConstruction<Real> build_tree(int n, int depth, const ParamSpace& params) {
  params.require_main_regime("build_tree");
  if (n < 1) throw GeometryError("dimension must be positive");
  if (depth < 0) throw RegimeError("build_tree: depth must be >= 0");
  using std::sqrt;
  TreeConstruction<Real> t;
  t.n = n;
  t.depth = depth;
  t.params = params;
  t.N0 = find_N0(n);
  const Real rn = sqrt(Real(n));
  for (int i = 0; i <= depth; ++i) {
    t.l.push_back(tree_length<Real>(i, n));
    t.d_raw.push_back(tree_length<Real>(i, n));
    t.h.push_back(std::pow(2.0, (params.inv_p() - params.alpha()) * i * i / 2.0));
  }
  t.d_hat = modify_distances<Real>(t.N0, depth, n, &t.R_hat, &t.radius_terms);
  for (const auto& r : t.R_hat) t.D_hat.push_back(rn * r);
  for (int i = 0; i <= depth; ++i) {
    auto ui = static_cast<std::size_t>(i);
    t.delta_hat.push_back(rn * (t.d_hat[ui] - t.R_hat[ui + 1]));
  }
  t.L0 = t.l[0] + 2 * t.D_hat[0] + 1;

  std::vector<Real> centers{Real(0)};
  t.levels.push_back({BasicCube<Real>::diagonal(n, Real(0), t.l[0])});
  for (int i = 1; i <= depth; ++i) {
    auto ui = static_cast<std::size_t>(i);
    const Real offset = t.l[ui - 1] / 2 + t.d_hat[ui - 1] + t.l[ui] / 2;
    std::vector<Real> next;
    next.reserve(centers.size() * 2);
    BasicCubeFamily<Real> level;
    level.reserve(centers.size() * 2);
    for (const auto& c : centers) {
      for (const Real& child : {c - offset, c + offset}) {
        next.push_back(child);
        level.push_back(BasicCube<Real>::diagonal(n, child, t.l[ui]));
      }
    }
    centers = std::move(next);
    t.levels.push_back(std::move(level));
  }
  return t;
}

/// f = sum_i h_i 1_I over all cubes I of level i, pieces in level order.
template <class Real>
BasicStepFunction<Real> tree_function(const TreeConstruction<Real>& t) {
  std::vector<BasicPiece<Real>> pcs;
  pcs.reserve(t.cube_count());
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    for (const auto& c : t.levels[i]) pcs.push_back({c, t.h[i]});
  }
  return BasicStepFunction<Real>(t.n, std::move(pcs));
}

/// Integral of |f|^q over the tree truncated at `depth`, level by level:
/// sum_i 2^{-(1 - q/p + q alpha) i^2 / 2 - 1/2}. Independent of n.
inline double tree_lq_closed_form(int depth, const ParamSpace& params, double q) {
  double acc = 0.0;
  for (int i = 0; i <= depth; ++i) {
    acc += std::pow(2.0, -(1.0 - q * params.inv_p() + q * params.alpha()) * i * i / 2.0 - 0.5);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Power function split.

struct PowerSplit {
  int N = 2;
  int n = 1;
  ParamSpace params{2.0, 1.0, -0.25};
  double s = 0.0;              // n (alpha - 1/p)
  double ring_exponent = 0.0;  // q s + n
  double orthant_measure = 0.0;
  double C0 = 0.0;
  RadialPower f{-1.0, 1};
  RadialPower f1{-1.0, 1};
  RadialPower f2{-1.0, 1};
};

inline PowerSplit power_split(int N, int n, const ParamSpace& params) {
  if (n < 1) throw GeometryError("dimension must be positive");
  if (N < 2 || !(N > std::sqrt(static_cast<double>(n)))) {
    throw RegimeError("power_split: need N >= 2 and N > sqrt(n)");
  }
  params.require_finite_p("power_split");
  if (params.q_infinite()) throw RegimeError("power_split: requires finite q");
  PowerSplit ps;
  ps.N = N;
  ps.n = n;
  ps.params = params;
  const double p = params.p();
  const double q = params.q();
  ps.s = n * (params.alpha() - 1.0 / p);
  ps.ring_exponent = q * ps.s + n;
  if (!(ps.ring_exponent > 0.0)) {
    throw RegimeError("power_split: q n alpha - q n / p + n must be positive, got " + std::to_string(ps.ring_exponent));
  }
  ps.orthant_measure = orthant_sphere_measure(n);
  const double E = ps.ring_exponent;
  const double cells = std::pow(static_cast<double>(N), n) - 1.0;
  const double ring = ps.orthant_measure * (std::pow(N, E) - std::pow(std::sqrt(static_cast<double>(n)), E)) / E;
  ps.C0 = std::pow(cells, 1.0 - p / q) * std::pow(ring, p / q);
  ps.f = RadialPower(ps.s, n);
  ps.f1 = RadialPower(ps.s, n, RadialRegion::inside_corner, 1.0);
  ps.f2 = RadialPower(ps.s, n, RadialRegion::outside_corner, 1.0);
  return ps;
}

// ---------------------------------------------------------------------------
// Shell thresholds inside Q0 = [-1, 1].

struct ShellConstruction {
  double e_lo = -1.0;  // E = [e_lo, e_hi] inside [-1, 1]
  double e_hi = 1.0;
  double exponent = 0.0;  // 1 / (p alpha - 1)
  double Z = 0.0;         // sum_l l^{exponent}
  long Z_terms = 0;
  std::vector<double> t;  // t_0 = 1, t_1, ..., t_K

  double measure_E() const { return e_hi - e_lo; }
  /// g(t) = |[-t, t] cap E|.
  double g(double x) const { return std::max(0.0, std::min(x, e_hi) - std::max(-x, e_lo)); }
  /// Mass of E in the shell between t_{k-1} and t_k.
  double shell_mass(int k) const {
    return g(t[static_cast<std::size_t>(k - 1)]) - g(t[static_cast<std::size_t>(k)]);
  }
  /// The per-shell mass the thresholds are designed for: (|E|/2) k^{exponent} / Z.
  double target_mass(int k) const { return measure_E() / 2.0 * std::pow(static_cast<double>(k), exponent) / Z; }
};

inline ShellConstruction shell_thresholds(double p, double alpha, int K, double e_lo = -1.0, double e_hi = 1.0) {
  if (!(p >= 1.0) || std::isinf(p)) throw RegimeError("shell_thresholds: p must be in [1, inf)");
  if (K < 1) throw RegimeError("shell_thresholds: K must be >= 1");
  if (!(e_lo >= -1.0) || !(e_hi <= 1.0) || !(e_lo < e_hi)) throw GeometryError("shell_thresholds: E must lie in [-1, 1]");
  const double pa = p * alpha;
  if (!(pa < 1.0)) throw RegimeError("shell_thresholds: requires p alpha < 1");
  ShellConstruction sc;
  sc.e_lo = e_lo;
  sc.e_hi = e_hi;
  sc.exponent = 1.0 / (pa - 1.0);
  if (!(sc.exponent < -1.0)) {
    throw RegimeError("shell_thresholds: exponent 1/(p alpha - 1) = " + std::to_string(sc.exponent) +
                      " is >= -1, the normalizer diverges");
  }
  const double s = -sc.exponent;
  SeriesSum Z = power_series(s);
  sc.Z = Z.value;
  sc.Z_terms = Z.terms;
  sc.t.push_back(1.0);
  const double half = sc.measure_E() / 2.0;
  for (int k = 1; k <= K; ++k) {
    const double target = half * power_tail(s, k) / sc.Z;
    // inf{t in [0,1] : g(t) >= target}; g is continuous and nondecreasing.
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-15) {
      double mid = 0.5 * (lo + hi);
      if (sc.g(mid) >= target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    sc.t.push_back(hi);
  }
  return sc;
}

}  // namespace rmlab
