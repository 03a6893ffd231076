#pragma once

#include <cmath>

#include <boost/multiprecision/float128.hpp>

namespace rmlab {

/// 113-bit binary float. The descendant tree in one dimension has cubes of
/// side 2^-84.5 at unit scale, which double cannot resolve.
using quad = boost::multiprecision::float128;

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
inline Real sqrt_n(int n) {
  using std::sqrt;
  return sqrt(Real(n));
}

/// 2^x in the given scalar.
template <class Real>
inline Real exp2_real(const Real& x) {
  using std::pow;
  return pow(Real(2), x);
}

}  // namespace rmlab
