#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rmlab/geometry.hpp"

namespace rmlab {

enum class BoundKind { exact, lower, upper };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::exact:
      return "exact";
    case BoundKind::lower:
      return "lower";
    case BoundKind::upper:
      return "upper";
  }
  return "unknown";
}

/// One step of a convergence trace: the depth or truncation index and the
/// value obtained there.
struct TracePoint {
  long index = 0;
  double value = 0.0;
};

template <class Real = double>
struct BasicNormEstimate {
  double value = 0.0;
  /// The p-th power of `value` where a family sum is involved (RM scores);
  /// otherwise equal to `value`.
  double power_sum = 0.0;
  bool infinite = false;
  BoundKind kind = BoundKind::exact;
  BasicCubeFamily<Real> certificate;
  std::string formula;
  std::vector<TracePoint> trace;
};

using NormEstimate = BasicNormEstimate<double>;

}  // namespace rmlab
