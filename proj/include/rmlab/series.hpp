#pragma once

#include <cmath>
#include <string>

#include "rmlab/errors.hpp"

namespace rmlab {

/// A truncated positive series: the exact partial sum up to `terms`
/// plus an analytic estimate of the remainder.
struct SeriesSum {
  double value = 0.0;
  double partial = 0.0;
  double tail = 0.0;
  long terms = 0;
};

namespace detail {

/// Euler-Maclaurin estimate of sum_{l > M} l^{-s}, s > 1.
inline double power_tail_em(double s, double M) {
  const double f = std::pow(M, -s);
  return std::pow(M, 1.0 - s) / (s - 1.0) - f / 2.0 + s * f / (12.0 * M) -
         s * (s + 1.0) * (s + 2.0) * f / (720.0 * M * M * M);
}

inline constexpr long kDirectTerms = 1000;

}  // namespace detail

/// sum_{l=1}^{L} l^{-s}, summed smallest term first.
inline double power_partial_sum(double s, long L) {
  double acc = 0.0;
  for (long l = L; l >= 1; --l) acc += std::pow(static_cast<double>(l), -s);
  return acc;
}

/// sum_{l > L} l^{-s} for s > 1.
inline double power_tail(double s, long L) {
  if (!(s > 1.0)) throw RegimeError("power_tail: series sum l^-s diverges for s=" + std::to_string(s));
  if (L < 0) L = 0;
  if (L >= detail::kDirectTerms) return detail::power_tail_em(s, static_cast<double>(L));
  double acc = detail::power_tail_em(s, static_cast<double>(detail::kDirectTerms));
  for (long l = detail::kDirectTerms; l > L; --l) acc += std::pow(static_cast<double>(l), -s);
  return acc;
}

/// sum_{l >= 1} l^{-s} split at L terms.
inline SeriesSum power_series(double s, long L = detail::kDirectTerms) {
  if (!(s > 1.0)) throw RegimeError("power_series: series sum l^-s diverges for s=" + std::to_string(s));
  if (L < 1) L = 1;
  SeriesSum out;
  out.terms = L;
  out.partial = power_partial_sum(s, L);
  out.tail = power_tail(s, L);
  out.value = out.partial + out.tail;
  return out;
}

/// H_L = sum_{l <= L} 1/l.
inline double harmonic_number(long L) { return power_partial_sum(1.0, L); }

}  // namespace rmlab
