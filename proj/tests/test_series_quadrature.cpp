#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <gtest/gtest.h>

#include "rmlab/quadrature.hpp"
#include "rmlab/series.hpp"

using namespace rmlab;

TEST(Series, ZetaValues) {
  // Oracle: Boost's Riemann zeta.
  for (double s : {1.1, 4.0 / 3.0, 1.5, 2.0, 3.0}) {
    const auto z = power_series(s);
    EXPECT_NEAR(z.value, boost::math::zeta(s), 1e-10 * boost::math::zeta(s)) << "s=" << s;
    EXPECT_NEAR(z.partial + z.tail, z.value, 1e-15 * z.value);
  }
  EXPECT_NEAR(power_series(1.5).value, 2.6123753486854883, 1e-10);
  EXPECT_NEAR(power_series(4.0 / 3.0).value, 3.6009377504588627, 1e-10);
}

TEST(Series, TailMatchesZetaMinusPartial) {
  for (double s : {4.0 / 3.0, 1.5, 2.5}) {
    for (long L : {0L, 1L, 7L, 50L, 999L, 1000L, 5000L, 100000L}) {
      double partial = 0.0;
      for (long l = 1; l <= L; ++l) partial += std::pow(static_cast<double>(l), -s);
      const double oracle = boost::math::zeta(s) - partial;
      EXPECT_NEAR(power_tail(s, L), oracle, 1e-10 * boost::math::zeta(s)) << "s=" << s << " L=" << L;
    }
  }
}

TEST(Series, DivergentExponentRejected) {
  EXPECT_THROW(power_series(1.0), RegimeError);
  EXPECT_THROW(power_tail(0.5, 10), RegimeError);
}

TEST(Series, HarmonicNumbers) {
  EXPECT_DOUBLE_EQ(harmonic_number(1), 1.0);
  EXPECT_DOUBLE_EQ(harmonic_number(2), 1.5);
  EXPECT_NEAR(harmonic_number(3), 11.0 / 6.0, 1e-15);
  // H_K - ln K - gamma ~ 1/(2K).
  const double K = 1000;
  EXPECT_NEAR(harmonic_number(1000) - std::log(K) - std::numbers::egamma, 1.0 / (2 * K) - 1.0 / (12 * K * K), 1e-12);
  EXPECT_NEAR(harmonic_number(1000), 7.4854708605503451, 1e-12);
}

TEST(Quadrature, SmoothIntegrands) {
  Box b{{0.0, 0.0}, {1.0, 2.0}};
  auto r = integrate_box([](const Coords<double>& x) { return x[0] * x[1]; }, b);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  Box c{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  auto e = integrate_box([](const Coords<double>& x) { return std::exp(x[0] + x[1] + x[2]); }, c);
  EXPECT_NEAR(e.value, std::pow(std::exp(1.0) - 1.0, 3), 1e-9);
}

TEST(Quadrature, EmptyBoxIsZero) {
  Box b{{0.0}, {0.0}};
  EXPECT_EQ(integrate_box([](const Coords<double>&) { return 1.0; }, b).value, 0.0);
}

TEST(Quadrature, BudgetExhaustionReportsAchievedError) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-15;
  opt.max_depth = 1;
  Box b{{0.0}, {1.0}};
  try {
    integrate_box([](const Coords<double>& x) { return std::sin(200.0 * x[0]) + 1.0; }, b, opt);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.achieved_error(), 0.0);
  }
}

TEST(RadialIntegral, OneDimensionalClosedForm) {
  // Integral of x^{-1/2} over [1,4] is 2.
  EXPECT_NEAR(radial_power_box_integral(-0.5, Box{{1.0}, {4.0}}).value, 2.0, 1e-10);
  // Singular at 0: integral of x^{-3/4} over [0,2] is 4 * 2^{1/4}.
  EXPECT_NEAR(radial_power_box_integral(-0.75, Box{{0.0}, {2.0}}).value, 4.0 * std::pow(2.0, 0.25), 1e-9);
  EXPECT_THROW(radial_power_box_integral(-1.0, Box{{0.0}, {1.0}}), QuadratureError);
}

// Oracle: polar coordinates. Over [0,m]^2 the integral of |x|^s is
// 2 * int_0^{pi/4} (m sec phi)^{s+2} / (s+2) dphi.
TEST(RadialIntegral, CornerSquareAgainstPolar) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double s : {-1.5, -1.0, -0.5, 0.0, 1.0}) {
    for (double m : {0.5, 1.0, 3.0}) {
      const double polar = 2.0 * ts.integrate(
                                     [&](double phi) { return std::pow(m / std::cos(phi), s + 2.0) / (s + 2.0); }, 0.0,
                                     std::numbers::pi / 4);
      const double got = radial_power_box_integral(s, Box{{0.0, 0.0}, {m, m}}).value;
      EXPECT_NEAR(got, polar, 1e-8 * polar) << "s=" << s << " m=" << m;
    }
  }
}

// Rectangle touching the origin: [0,a] x [0,b] = square + remainder.
TEST(RadialIntegral, CornerRectangleAdditivity) {
  const double s = -1.2;
  const double whole = radial_power_box_integral(s, Box{{0.0, 0.0}, {1.0, 3.0}}).value;
  const double square = radial_power_box_integral(s, Box{{0.0, 0.0}, {1.0, 1.0}}).value;
  const double rest = radial_power_box_integral(s, Box{{0.0, 1.0}, {1.0, 3.0}}).value;
  EXPECT_NEAR(whole, square + rest, 1e-8 * whole);
}

TEST(RadialIntegral, ThreeDimensionalCornerAgainstSpherical) {
  // Over the unit ball octant: (pi/2) / (s+3) * 1. The cube [0,1]^3 minus the
  // ball octant is smooth, so check the ball part via a radial cutoff on a
  // box far from the origin instead: scaling I(m) = m^{s+3} I(1).
  const double s = -2.0;
  const double i1 = radial_power_box_integral(s, Box{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}).value;
  const double i2 = radial_power_box_integral(s, Box{{0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}}).value;
  EXPECT_NEAR(i2, std::pow(2.0, s + 3) * i1, 1e-8 * i2);
  // Lower bound: the ball octant of radius 1 is inside the cube.
  EXPECT_GT(i1, std::numbers::pi / 2 / (s + 3));
  // Upper bound: the ball octant of radius sqrt(3) contains it.
  EXPECT_LT(i1, std::numbers::pi / 2 * std::pow(std::sqrt(3.0), s + 3) / (s + 3));
}
