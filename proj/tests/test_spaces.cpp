#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wellpose/spaces.hpp"

using namespace wellpose;

namespace {

SpaceRef line3() { return share(FiniteMetricSpace::grid1d(0.0, 2.0, 2)); }

}  // namespace

TEST(Ball, UnitLineAllWithinOne) {
  auto s = line3();
  EXPECT_EQ(ball(s, 1, 1.0).members(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Ball, ZeroRadiusIsCenter) {
  auto s = share(FiniteMetricSpace::point_cloud({{0, 0}, {1, 0}, {0, 3}}, Metric::l1));
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(ball(s, c, 0.0).members(), std::vector<std::size_t>{c});
}

TEST(Ball, GridQuarterAroundHalf) {
  // 101 points, step 0.01
  auto s = share(FiniteMetricSpace::grid1d(0.0, 1.0, 100));
  const auto b = ball(s, 50, 0.25);
  std::vector<std::size_t> want;
  for (std::size_t i = 25; i <= 75; ++i) want.push_back(i);
  EXPECT_EQ(b.members(), want);
}

TEST(Ball, NegativeRadiusThrows) { EXPECT_THROW(ball(line3(), 0, -0.1), DomainError); }

TEST(Diam, SingletonAndPair) {
  auto s = line3();
  EXPECT_EQ(diam(PointSubset(s, {2})), 0.0);
  EXPECT_EQ(diam(PointSubset(s, {0, 1})), 1.0);
  EXPECT_THROW(diam(PointSubset(s, {})), DomainError);
}

TEST(Diam, GridSampleOfTenth) {
  auto s = share(FiniteMetricSpace::grid1d(0.0, 1.0, 100));
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i <= 10; ++i) idx.push_back(i);
  EXPECT_DOUBLE_EQ(diam(PointSubset(s, idx)), 0.1);
}

TEST(SetDistance, Examples) {
  auto s = share(FiniteMetricSpace::grid1d(0.0, 1.0, 100));
  EXPECT_EQ(set_distance(PointSubset(s, {1, 2, 3}), PointSubset(s, {3, 4})), 0.0);
  auto l = line3();
  EXPECT_EQ(set_distance(PointSubset(l, {0}), PointSubset(l, {1})), 1.0);
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i <= 20; ++i) a.push_back(i);
  for (std::size_t i = 50; i <= 100; ++i) b.push_back(i);
  EXPECT_NEAR(set_distance(PointSubset(s, a), PointSubset(s, b)), 0.3, 1e-15);
  EXPECT_THROW(set_distance(PointSubset(s, {}), PointSubset(s, b)), DomainError);
}

TEST(Ball, RandomCloudMatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Metric m : {Metric::euclidean, Metric::linf, Metric::l1}) {
    std::vector<std::vector<double>> pts(60, std::vector<double>(3));
    for (auto& p : pts)
      for (double& c : p) c = u(rng);
    auto s = share(FiniteMetricSpace::point_cloud(pts, m));
    for (std::size_t c = 0; c < pts.size(); c += 7) {
      const double r = 0.5 + 0.5 * u(rng);
      std::vector<std::size_t> want;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
          const double t = std::abs(pts[c][k] - pts[j][k]);
          if (m == Metric::euclidean) d += t * t;
          else if (m == Metric::l1) d += t;
          else d = std::max(d, t);
        }
        if (m == Metric::euclidean) d = std::sqrt(d);
        if (d <= r) want.push_back(j);
      }
      EXPECT_EQ(ball(s, c, r).members(), want);
      const auto b = ball(s, c, r);
      EXPECT_EQ(diam(b), oracle::diam(b.members(), [&](std::size_t i, std::size_t j) { return s->dist(i, j); }));
    }
  }
}

TEST(Space, MatrixValidation) {
  EXPECT_NO_THROW(FiniteMetricSpace::from_matrix(2, {0, 1, 1, 0}));
  EXPECT_ANY_THROW(FiniteMetricSpace::from_matrix(2, {0, 1, 2, 0}));
  EXPECT_ANY_THROW(FiniteMetricSpace::from_matrix(2, {0, 1, 1}));
  // triangle violation
  EXPECT_FALSE(validate_metric(FiniteMetricSpace::from_matrix(3, {0, 1, 5, 1, 0, 1, 5, 1, 0})).ok);
}
