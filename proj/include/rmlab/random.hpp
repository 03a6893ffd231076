#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rmlab/funcrep.hpp"
#include "rmlab/geometry.hpp"
#include "rmlab/params.hpp"

namespace rmlab {

using Rng = std::mt19937_64;

namespace detail {

inline void random_partition(Rng& rng, const Cube& cell, int level, int max_level, double split_prob,
                             CubeFamily& out) {
  std::bernoulli_distribution split(split_prob);
  if (level < max_level && (level == 0 || split(rng))) {
    for (const auto& ch : dyadic_children(cell)) random_partition(rng, ch, level + 1, max_level, split_prob, out);
  } else {
    out.push_back(cell);
  }
}

}  // namespace detail

/// Random tiling of `root` by dyadic subcubes at most max_level halvings deep.
inline CubeFamily random_dyadic_partition(Rng& rng, const Cube& root, int max_level, double split_prob = 0.6) {
  CubeFamily out;
  detail::random_partition(rng, root, 0, max_level, split_prob, out);
  return out;
}

/// Step function on a random dyadic partition of root, heights uniform in
/// [0, max_height) with a fraction of cells left empty.
inline StepFunction random_dyadic_step_function(Rng& rng, const Cube& root, int max_level, double max_height = 2.0,
                                                double empty_prob = 0.2) {
  std::uniform_real_distribution<double> h(0.0, max_height);
  std::bernoulli_distribution empty(empty_prob);
  std::vector<Piece> pcs;
  for (auto& c : random_dyadic_partition(rng, root, max_level)) {
    if (!empty(rng)) pcs.push_back({std::move(c), h(rng)});
  }
  return StepFunction(root.dim(), std::move(pcs));
}

/// Step function constant on each cell of the uniform k-cell grid of a 1-D root.
inline StepFunction random_grid_step_function(Rng& rng, const Cube& root, int k, double empty_prob = 0.2) {
  std::uniform_real_distribution<double> h(0.0, 1.0);
  std::bernoulli_distribution empty(empty_prob);
  std::vector<Piece> pcs;
  const double w = root.side() / k;
  for (int i = 0; i < k; ++i) {
    if (empty(rng)) continue;
    pcs.push_back({Cube::interval(root.lower(0) + w * i, i + 1 == k ? root.upper(0) : root.lower(0) + w * (i + 1)), h(rng)});
  }
  return StepFunction(1, std::move(pcs));
}

/// A random subfamily of a random dyadic partition of root.
inline CubeFamily random_family(Rng& rng, const Cube& root, int max_level, double keep_prob = 0.7) {
  std::bernoulli_distribution keep(keep_prob);
  CubeFamily out;
  for (auto& c : random_dyadic_partition(rng, root, max_level, 0.5)) {
    if (keep(rng)) out.push_back(std::move(c));
  }
  return out;
}

/// Uniform draw from p in (1, p_max), q in [1, p), alpha strictly inside
/// (1/p - 1/q, 0).
inline ParamSpace random_main_regime(Rng& rng, double p_max = 5.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = 1.05 + (p_max - 1.05) * u(rng);
  const double q = 1.0 + (p - 1.0) * 0.95 * u(rng);
  const double d = 1.0 / p - 1.0 / q;
  const double alpha = d * (0.02 + 0.96 * u(rng));
  return ParamSpace(p, q, alpha);
}

}  // namespace rmlab
