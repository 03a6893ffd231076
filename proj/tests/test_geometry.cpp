#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rmlab/geometry.hpp"
#include "rmlab/random.hpp"

using namespace rmlab;

TEST(Cube, VolumeIsSidePower) {
  EXPECT_DOUBLE_EQ(Cube({0.0, 0.0}, 1.0).volume(), 1.0);
  EXPECT_DOUBLE_EQ(Cube({0.0}, 0.5).volume(), 0.5);
  EXPECT_DOUBLE_EQ(Cube({0.0, 0.0, 0.0}, 2.0).volume(), 8.0);
}

TEST(Cube, RejectsInvalidInput) {
  EXPECT_THROW(Cube({0.0}, 0.0), GeometryError);
  EXPECT_THROW(Cube({0.0}, -1.0), GeometryError);
  EXPECT_THROW(Cube({std::nan("")}, 1.0), GeometryError);
  EXPECT_THROW(Cube({kInf}, 1.0), GeometryError);
  EXPECT_THROW(interiors_disjoint(Cube({0.0}, 1.0), Cube({0.0, 0.0}, 1.0)), GeometryError);
  EXPECT_THROW(box_distance(Cube({0.0}, 1.0), Cube({0.0, 0.0}, 1.0)), GeometryError);
}

TEST(Cube, InteriorsDisjoint) {
  EXPECT_TRUE(interiors_disjoint(Cube::interval(0, 1), Cube::interval(1, 2)));
  EXPECT_FALSE(interiors_disjoint(Cube::interval(0, 1), Cube::interval(0.5, 1.5)));
  EXPECT_TRUE(interiors_disjoint(Cube({0.0, 0.0}, 1.0), Cube({2.0, 2.0}, 1.0)));
  // Sharing an edge in 2-D.
  EXPECT_TRUE(interiors_disjoint(Cube({0.0, 0.0}, 1.0), Cube({1.0, 0.5}, 1.0)));
}

TEST(Cube, BoxDistance) {
  EXPECT_DOUBLE_EQ(box_distance(Cube::interval(0, 1), Cube::interval(3, 4)), 2.0);
  EXPECT_DOUBLE_EQ(box_distance(Cube::interval(0, 1), Cube::interval(1, 4)), 0.0);
  EXPECT_NEAR(box_distance(Cube({0.0, 0.0}, 1.0), Cube({2.0, 2.0}, 1.0)), std::sqrt(2.0), 1e-15);
}

// Distance between sampled points never drops below the box distance, and the
// grid minimum approaches it.
TEST(Cube, BoxDistanceAgainstPointSampling) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> s(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Cube a({u(rng), u(rng)}, s(rng));
    const Cube b({u(rng), u(rng)}, s(rng));
    const double d = box_distance(a, b);
    double best = kInf;
    const int g = 40;
    for (int i = 0; i <= g; ++i) {
      for (int j = 0; j <= g; ++j) {
        for (int k = 0; k <= g; k += g) {
          for (int l = 0; l <= g; ++l) {
            // Points on the grid of a against the boundary grid of b.
            const double x0 = a.lower(0) + a.side() * i / g, x1 = a.lower(1) + a.side() * j / g;
            const double y0 = b.lower(0) + b.side() * k / g, y1 = b.lower(1) + b.side() * l / g;
            const double e = std::hypot(x0 - y0, x1 - y1);
            ASSERT_GE(e, d - 1e-12);
            best = std::min(best, e);
            const double z0 = b.lower(0) + b.side() * l / g, z1 = b.lower(1) + b.side() * k / g;
            best = std::min(best, std::hypot(x0 - z0, x1 - z1));
          }
        }
      }
    }
    EXPECT_LE(best - d, 2.0 * std::max(a.side(), b.side()) / g * std::sqrt(2.0));
  }
}

TEST(Cube, BoxDistanceSymmetricAndTriangle) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> s(0.1, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Cube a({u(rng), u(rng)}, s(rng));
    const Cube b({u(rng), u(rng)}, s(rng));
    const Cube c({u(rng), u(rng)}, s(rng));
    EXPECT_EQ(box_distance(a, b), box_distance(b, a));
    // Set distance obeys d(a,c) <= d(a,b) + diam(b) + d(b,c).
    EXPECT_LE(box_distance(a, c), box_distance(a, b) + b.side() * std::sqrt(2.0) + box_distance(b, c) + 1e-12);
  }
}

TEST(Cube, DyadicChildren) {
  const auto ch = dyadic_children(Cube::interval(0, 1));
  ASSERT_EQ(ch.size(), 2u);
  EXPECT_EQ(ch[0], Cube::interval(0, 0.5));
  EXPECT_EQ(ch[1], Cube::interval(0.5, 1));
  const auto sq = dyadic_children(Cube({0.0, 0.0}, 1.0));
  ASSERT_EQ(sq.size(), 4u);
  for (const auto& c : sq) EXPECT_EQ(c.side(), 0.5);
  EXPECT_TRUE(pairwise_interiors_disjoint(sq));
}

TEST(Cube, DyadicChildrenTileParent) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> s(0.01, 5.0);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      Coords<double> lo;
      // Dyadic rationals keep the child corners exact.
      for (int i = 0; i < n; ++i) lo.push_back(std::ldexp(std::round(std::ldexp(u(rng), 10)), -10));
      const Cube c(lo, std::ldexp(std::round(std::ldexp(s(rng), 10)), -10));
      const auto ch = dyadic_children(c);
      ASSERT_EQ(ch.size(), std::size_t{1} << n);
      double vol = 0.0;
      for (const auto& k : ch) {
        vol += k.volume();
        EXPECT_TRUE(c.contains(k));
      }
      EXPECT_NEAR(vol, c.volume(), 1e-12 * c.volume());
      EXPECT_TRUE(pairwise_interiors_disjoint(ch));
    }
  }
}

TEST(Cube, PairwiseDisjointMatchesQuadraticCheck) {
  Rng rng(17);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::uniform_real_distribution<double> s(0.05, 0.6);
  for (int trial = 0; trial < 300; ++trial) {
    CubeFamily fam;
    for (int i = 0; i < 8; ++i) fam.push_back(Cube({u(rng), u(rng)}, s(rng)));
    bool expect = true;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      for (std::size_t j = i + 1; j < fam.size(); ++j) expect = expect && interiors_disjoint(fam[i], fam[j]);
    }
    EXPECT_EQ(pairwise_interiors_disjoint(fam), expect);
  }
}

TEST(Cube, BoundingCube) {
  const auto b = bounding_cube(Cube({0.0, 0.0}, 1.0), Cube({2.0, 0.5}, 0.5));
  EXPECT_EQ(b, Cube({0.0, 0.0}, 2.5));
  CubeFamily empty;
  EXPECT_FALSE(bounding_cube(std::span<const Cube>(empty)).has_value());
}

TEST(Cube, FarthestPointDistance) {
  // Farthest point of [0,4] from [1,2] is 0 at distance 1 or 4 at distance 2.
  EXPECT_DOUBLE_EQ(farthest_point_distance(Cube::interval(0, 4), Cube::interval(1, 2)), 2.0);
}

TEST(Domain, KindAndContainment) {
  const auto X = Domain::whole_space(2);
  EXPECT_EQ(X.kind(), DomainKind::whole_space);
  EXPECT_FALSE(X.bounding().has_value());
  EXPECT_TRUE(X.contains(Cube({100.0, -3.0}, 7.0)));
  const auto Q = Domain::cube(Cube({0.0, 0.0}, 1.0));
  EXPECT_EQ(Q.kind(), DomainKind::cube);
  EXPECT_TRUE(Q.contains(Cube({0.5, 0.5}, 0.5)));
  EXPECT_FALSE(Q.contains(Cube({0.75, 0.5}, 0.5)));
}

TEST(RingSubdivision, Examples) {
  const auto r = ring_subdivision(0, 2, 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], Cube::interval(1, 2));

  const auto sq = ring_subdivision(0, 2, 2);
  ASSERT_EQ(sq.size(), 3u);
  for (const auto& c : sq) {
    EXPECT_EQ(c.side(), 1.0);
    EXPECT_FALSE(c == Cube({0.0, 0.0}, 1.0));
  }

  const auto t = ring_subdivision(1, 3, 1);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], Cube::interval(3, 6));
  EXPECT_EQ(t[1], Cube::interval(6, 9));

  EXPECT_THROW(ring_subdivision(0, 1, 1), RegimeError);
  EXPECT_THROW(ring_subdivision(0, 2, 4), RegimeError);  // N must exceed sqrt(n)
}

TEST(RingSubdivision, CountDisjointnessAndVolume) {
  for (int n = 1; n <= 3; ++n) {
    for (int N = 2; N <= 4; ++N) {
      if (!(N > std::sqrt(n))) continue;
      for (int i = -3; i <= 3; ++i) {
        const auto r = ring_subdivision(i, N, n);
        ASSERT_EQ(r.size(), static_cast<std::size_t>(std::pow(N, n)) - 1);
        EXPECT_TRUE(pairwise_interiors_disjoint(r));
        double vol = 0.0;
        for (const auto& c : r) vol += c.volume();
        const double expect = std::pow(N, (i + 1.0) * n) - std::pow(N, 1.0 * i * n);
        EXPECT_NEAR(vol, expect, 1e-12 * expect);
        const Cube outer(Coords<double>(static_cast<std::size_t>(n), 0.0), std::pow(N, i + 1.0));
        const Cube inner(Coords<double>(static_cast<std::size_t>(n), 0.0), std::pow(N, 1.0 * i));
        for (const auto& c : r) {
          EXPECT_TRUE(outer.contains(c));
          EXPECT_TRUE(interiors_disjoint(c, inner));
        }
      }
    }
  }
}

TEST(ShellPartition, Examples) {
  const auto a = shell_partition_1d(1.0, 0.5, 1);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], Cube::interval(-1.0, -0.5));
  EXPECT_EQ(a[1], Cube::interval(0.5, 1.0));
  const auto b = shell_partition_1d(1.0, 0.5, 2);
  ASSERT_EQ(b.size(), 4u);
  for (const auto& c : b) EXPECT_DOUBLE_EQ(c.side(), 0.25);
  EXPECT_THROW(shell_partition_1d(0.5, 1.0, 1), GeometryError);
  EXPECT_THROW(shell_partition_1d(1.0, 0.0, 1), GeometryError);
}

TEST(ShellPartition, TotalLength) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<int> k(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a < b) std::swap(a, b);
    const auto fam = shell_partition_1d(a, b, k(rng));
    double len = 0.0;
    for (const auto& c : fam) len += c.side();
    EXPECT_NEAR(len, 2.0 * (a - b), 1e-12);
    EXPECT_TRUE(pairwise_interiors_disjoint(fam));
  }
}

TEST(Cube, QuadPrecisionKeepsTinyCubesApart) {
  // At offset 1, a gap of 2^-70 is invisible in double but not in quad.
  const quad one = 1;
  const quad eps = boost::multiprecision::ldexp(quad(1), -70);
  const QCube a({one}, eps);
  const QCube b({one + 2 * eps}, eps);
  EXPECT_TRUE(interiors_disjoint(a, b));
  EXPECT_GT(box_distance(a, b), quad(0));
  EXPECT_EQ(a.convert<double>().lower(0), b.convert<double>().lower(0));
}
