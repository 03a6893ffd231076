#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rmlab/funcrep.hpp"
#include "rmlab/norms.hpp"
#include "rmlab/random.hpp"

using namespace rmlab;

namespace {

StepFunction indicator(double a, double b, double h = 1.0) { return StepFunction(1, {{Cube::interval(a, b), h}}); }

DyadicOptions no_shift() {
  DyadicOptions o;
  o.offsets = {0.0};
  return o;
}

}  // namespace

TEST(RmScore, HandExamples) {
  const ParamSpace lp(2.0, 1.0, 0.0);
  // |Q|^{-1} (int_Q f)^2.
  EXPECT_DOUBLE_EQ(rm_score(indicator(0, 1), CubeFamily{Cube::interval(0, 1)}, lp), 1.0);
  EXPECT_DOUBLE_EQ(rm_score(indicator(0, 1, 1.5), CubeFamily{Cube::interval(0, 1)}, lp), 2.25);
  const StepFunction two(1, {{Cube::interval(0, 0.5), 1.0}, {Cube::interval(0.5, 1), 2.0}});
  EXPECT_DOUBLE_EQ(rm_score(two, CubeFamily{Cube::interval(0, 0.5), Cube::interval(0.5, 1)}, lp), 2.5);
  EXPECT_DOUBLE_EQ(rm_score(two, CubeFamily{}, lp), 0.0);
  // Main regime: |Q|^{-1/2} |Q cap [0,1]|^2.
  const ParamSpace m(2.0, 1.0, -0.25);
  EXPECT_NEAR(rm_term(indicator(0, 1), Cube::interval(0, 2), m), std::pow(2.0, -0.5), 1e-15);
  EXPECT_NEAR(rm_term(indicator(0, 1), Cube::interval(0, 0.5), m), std::pow(0.5, 1.5), 1e-15);
}

TEST(RmScore, QInfinityUsesMaxHeight) {
  const ParamSpace pi(2.0, kInf, -0.25);
  const StepFunction f(1, {{Cube::interval(0, 0.5), 1.0}, {Cube::interval(0.5, 1), 3.0}});
  // |Q|^{1 - p alpha} (max f)^p = 1^{1.5} * 9.
  EXPECT_DOUBLE_EQ(rm_term(f, Cube::interval(0, 1), pi), 9.0);
}

TEST(RmScore, RejectsBadFamilies) {
  const ParamSpace lp(2.0, 1.0, 0.0);
  const auto f = indicator(0, 1);
  EXPECT_THROW(rm_score(f, CubeFamily{Cube::interval(0, 1), Cube::interval(0.5, 1.5)}, lp), GeometryError);
  const auto dom = Domain::cube(Cube::interval(0, 1));
  EXPECT_THROW(rm_score(f, CubeFamily{Cube::interval(0.5, 1.5)}, lp, &dom), GeometryError);
  EXPECT_THROW(rm_score(f, CubeFamily{Cube({0.0, 0.0}, 1.0)}, lp), GeometryError);
  EXPECT_THROW(rm_score(f, CubeFamily{Cube::interval(0, 1)}, ParamSpace(kInf, 1.0, -0.5)), RegimeError);
}

TEST(Dyadic, HandExamples) {
  const ParamSpace m(2.0, 1.0, -0.25);
  auto e = rm_norm_dyadic(indicator(0, 1), Cube::interval(0, 2), 6, m, no_shift());
  EXPECT_NEAR(e.power_sum, 1.0, 1e-15);
  ASSERT_EQ(e.certificate.size(), 1u);
  EXPECT_EQ(e.certificate[0], Cube::interval(0, 1));
  EXPECT_EQ(e.kind, BoundKind::lower);
  ASSERT_EQ(e.trace.size(), 7u);
  EXPECT_NEAR(e.trace[0].value, std::pow(2.0, -0.25), 1e-15);
  EXPECT_NEAR(e.trace[1].value, 1.0, 1e-15);
  // Two bumps far apart: the DP picks both.
  const StepFunction two(1, {{Cube::interval(0, 1), 1.0}, {Cube::interval(6, 7), 2.0}});
  auto t = rm_norm_dyadic(two, Cube::interval(0, 8), 6, m, no_shift());
  EXPECT_NEAR(t.power_sum, 1.0 + 4.0, 1e-14);
  EXPECT_NEAR(t.value, std::sqrt(5.0), 1e-14);
}

TEST(Dyadic, ZeroFunctionAndErrors) {
  const ParamSpace m(2.0, 1.0, -0.25);
  auto e = rm_norm_dyadic(StepFunction(1), Cube::interval(0, 1), 4, m);
  EXPECT_EQ(e.power_sum, 0.0);
  EXPECT_TRUE(e.certificate.empty());
  EXPECT_THROW(rm_norm_dyadic(indicator(0, 1), Cube::interval(0, 1), -1, m), RegimeError);
  EXPECT_THROW(rm_norm_dyadic(indicator(0, 1), Cube({0.0, 0.0}, 1.0), 2, m), GeometryError);
}

TEST(Dyadic, CertificateRescoresToReportedSum) {
  Rng rng(11);
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto params = random_main_regime(rng);
      const Cube Q0 = Cube::diagonal(n, 0.5, 1.0);
      const auto f = random_dyadic_step_function(rng, Q0, n == 1 ? 7 : 4);
      const Cube root = Cube::diagonal(n, 0.5, 2.0);
      auto e = rm_norm_dyadic(f, root, n == 1 ? 9 : 6, params);
      EXPECT_TRUE(pairwise_interiors_disjoint(e.certificate));
      EXPECT_NEAR(rm_score(f, e.certificate, params), e.power_sum, 1e-12 * e.power_sum);
    }
  }
}

TEST(Dyadic, MonotoneInDepthAndOffsets) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto params = random_main_regime(rng);
    const auto f = random_dyadic_step_function(rng, Cube::interval(0, 1), 6);
    auto e = rm_norm_dyadic(f, Cube::interval(-0.5, 2), 10, params);
    for (std::size_t d = 1; d < e.trace.size(); ++d) EXPECT_GE(e.trace[d].value, e.trace[d - 1].value);
    auto one = rm_norm_dyadic(f, Cube::interval(-0.5, 2), 10, params, no_shift());
    EXPECT_GE(e.power_sum, one.power_sum);
    DyadicOptions seq;
    seq.parallel = false;
    EXPECT_EQ(rm_norm_dyadic(f, Cube::interval(-0.5, 2), 10, params, seq).power_sum, e.power_sum);
  }
}

// The O(k^2) interval recursion against exhaustive enumeration of all
// 2^{k-1} compositions.
TEST(Oracles, GridDynamicProgramMatchesBruteForce) {
  Rng rng(21);
  const Cube Q0 = Cube::interval(0, 1);
  for (int k = 4; k <= 12; ++k) {
    for (int trial = 0; trial < 8; ++trial) {
      const auto params = random_main_regime(rng);
      const auto f = random_grid_step_function(rng, Q0, k);
      const auto b = rm_norm_bruteforce_1d(f, Q0, k, params);
      const auto g = rm_norm_grid_dp_1d(f, Q0, k, params);
      EXPECT_NEAR(g.power_sum, b.power_sum, 1e-12 * b.power_sum) << "k=" << k;
      EXPECT_NEAR(rm_score(f, g.certificate, params), g.power_sum, 1e-12 * g.power_sum);
    }
  }
}

// Restricted to dyadic compositions the exhaustive search and the dyadic
// program see the same candidate families.
TEST(Oracles, DyadicFilteredBruteForceMatchesDyadicProgram) {
  Rng rng(22);
  const Cube Q0 = Cube::interval(0, 1);
  for (int m = 1; m <= 3; ++m) {
    const int k = 1 << m;
    for (int trial = 0; trial < 30; ++trial) {
      const auto params = random_main_regime(rng);
      const auto f = random_grid_step_function(rng, Q0, k);
      const auto b = rm_norm_bruteforce_1d(f, Q0, k, params, true);
      const auto d = rm_norm_dyadic(f, Q0, m, params, no_shift());
      EXPECT_NEAR(d.power_sum, b.power_sum, 1e-12 * b.power_sum) << "k=" << k;
      // Any composition can only do better.
      EXPECT_GE(rm_norm_bruteforce_1d(f, Q0, k, params).power_sum, b.power_sum * (1 - 1e-12));
    }
  }
  EXPECT_THROW(rm_norm_bruteforce_1d(indicator(0, 1), Q0, 6, ParamSpace(2, 1, -0.25), true), RegimeError);
  EXPECT_THROW(rm_norm_bruteforce_1d(indicator(0, 1), Q0, kBruteForceMaxCells + 1, ParamSpace(2, 1, -0.25)),
               RegimeError);
}

TEST(Riesz, EqualsLebesgueNormOnDyadicStepFunctions) {
  Rng rng(3);
  const Cube Q0 = Cube::interval(0, 1);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = random_dyadic_step_function(rng, Q0, 6);
      const double lp = lebesgue_norm(f, Domain::cube(Q0), p).value;
      EXPECT_NEAR(riesz_norm(f, Q0, p, 6).value, lp, 1e-9 * lp) << "p=" << p;
    }
  }
  EXPECT_THROW(riesz_norm(indicator(0, 1), Q0, 1.0, 3), RegimeError);
}

TEST(Riesz, CoarseDepthIsALowerBound) {
  Rng rng(4);
  const Cube Q0 = Cube::interval(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_dyadic_step_function(rng, Q0, 6);
    const double lp = lebesgue_norm(f, Domain::cube(Q0), 2.0).value;
    EXPECT_LE(riesz_norm(f, Q0, 2.0, 3).value, lp * (1 + 1e-12));
  }
}

// In the identity regime the single root cube is optimal.
TEST(Identity, SingletonIsOptimal) {
  Rng rng(8);
  const Cube Q0 = Cube::interval(0, 1);
  for (const ParamSpace params : {ParamSpace(2, 1, -0.6), ParamSpace(3, 2, -0.3), ParamSpace(2, 2, 0.0)}) {
    ASSERT_TRUE(params.in_identity_regime());
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = random_grid_step_function(rng, Q0, 10);
      const double single = rm_term(f, Q0, params);
      const auto b = rm_norm_bruteforce_1d(f, Q0, 10, params);
      EXPECT_NEAR(b.power_sum, single, 1e-9 * single);
    }
  }
}

TEST(Morrey, HandExamplesAndHomogeneity) {
  const auto f = indicator(0, 1);
  auto e = morrey_norm_estimate(f, Domain::whole_space(1), 1.0, -0.5);
  EXPECT_NEAR(e.value, 1.0, 1e-15);
  // q = 2, alpha = -1/4: |Q|^{-1/4} |Q cap [0,1]|^{1/2}, largest at Q = [0,1].
  EXPECT_NEAR(morrey_norm_estimate(f, Domain::whole_space(1), 2.0, -0.25).value, 1.0, 1e-15);
  // alpha = -1/q reduces to the L^q norm.
  const StepFunction two(1, {{Cube::interval(0, 1), 1.0}, {Cube::interval(4, 5), 2.0}});
  EXPECT_NEAR(morrey_norm_estimate(two, Domain::whole_space(1), 2.0, -0.5).value, std::sqrt(5.0), 1e-12);
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_dyadic_step_function(rng, Cube::interval(0, 1), 5);
    const double base = morrey_norm_estimate(g, Domain::whole_space(1), 1.5, -0.4).value;
    EXPECT_NEAR(morrey_norm_estimate(g.scaled(3.0), Domain::whole_space(1), 1.5, -0.4).value, 3.0 * base,
                1e-12 * base);
  }
  EXPECT_THROW(morrey_norm_estimate(f, Domain::whole_space(1), 2.0, 0.1), RegimeError);
  EXPECT_THROW(morrey_norm_estimate(f, Domain::whole_space(1), kInf, -0.1), RegimeError);
}

TEST(Morrey, DominatesEveryCandidateCube) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_dyadic_step_function(rng, Cube::interval(0, 1), 5);
    const auto e = morrey_norm_estimate(g, Domain::whole_space(1), 2.0, -0.3);
    for (const auto& Q : random_dyadic_partition(rng, Cube::interval(0, 1), 5)) {
      EXPECT_GE(e.value * (1 + 1e-12), morrey_term(g, Q, 2.0, -0.3));
    }
  }
}

TEST(RmNorm, DispatchesOnDomainAndExponent) {
  const ParamSpace m(2.0, 1.0, -0.25);
  const auto f = indicator(0, 1);
  EXPECT_NEAR(rm_norm(f, Domain::whole_space(1), m, 6).power_sum, 1.0, 1e-15);
  EXPECT_EQ(rm_norm(StepFunction(1), Domain::whole_space(1), m, 6).value, 0.0);
  EXPECT_NEAR(rm_norm(f, Domain::whole_space(1), ParamSpace(kInf, 1.0, -0.5), 4).value, 1.0, 1e-15);
  // On a cube domain cells outside the domain are never selected.
  const auto dom = Domain::cube(Cube::interval(0, 1));
  auto e = rm_norm(f, dom, m, 6);
  for (const auto& c : e.certificate) EXPECT_TRUE(dom.contains(c));
}

TEST(RmNorm, IncreasesWithSmallerQForFixedScaling) {
  // Holder on each cube: |Q|^{-1/q} ||f||_{L^q(Q)} is nondecreasing in q, so
  // with 1 - p alpha fixed the score is nondecreasing in q.
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_dyadic_step_function(rng, Cube::interval(0, 1), 5);
    const auto fam = random_family(rng, Cube::interval(0, 1), 5);
    double prev = 0.0;
    for (double q : {1.0, 1.25, 1.5, 1.75}) {
      const double s = rm_score(f, fam, ParamSpace(2.0, q, -0.1));
      EXPECT_GE(s, prev * (1 - 1e-12));
      prev = s;
    }
  }
}
