#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "wellpose/golden_section.hpp"
#include "wellpose/sampling.hpp"
#include "wellpose/seminorm.hpp"

using namespace wellpose;

TEST(Seminorm, LeafValues) {
  EXPECT_EQ(Seminorm::abs_linear({1.0, -2.0})(std::vector<double>{3.0, 4.0}), 5.0);
  EXPECT_EQ(Seminorm::euclidean(2)(std::vector<double>{3.0, 4.0}), 5.0);
  EXPECT_EQ(max_abs_norm(3)(std::vector<double>{1.0, -7.0, 2.0}), 7.0);
  EXPECT_EQ(l1_norm(3)(std::vector<double>{1.0, -7.0, 2.0}), 10.0);
  EXPECT_EQ((2.0 * Seminorm::euclidean(2))(std::vector<double>{3.0, 4.0}), 10.0);
  EXPECT_EQ((Seminorm::euclidean(2) + max_abs_norm(2))(std::vector<double>{3.0, 4.0}), 9.0);
}

TEST(Seminorm, LineQuotientExamples) {
  const auto lq_e = Seminorm::line_quotient(Seminorm::euclidean(2), {1.0, 0.0});
  EXPECT_NEAR(lq_e(std::vector<double>{3.0, 4.0}), 4.0, 1e-12);
  const auto lq_m = Seminorm::line_quotient(max_abs_norm(2), {1.0, 0.0});
  EXPECT_NEAR(lq_m(std::vector<double>{0.0, 2.0}), 2.0, 1e-12);
  // parallel to the direction
  EXPECT_NEAR(lq_e(std::vector<double>{-5.0, 0.0}), 0.0, 1e-12);
  const auto lq_d = Seminorm::line_quotient(max_abs_norm(2), {1.0, 2.0});
  EXPECT_NEAR(lq_d(std::vector<double>{0.5, 1.0}), 0.0, 1e-12);
}

TEST(Seminorm, Errors) {
  EXPECT_THROW(Seminorm::abs_linear({}), DomainError);
  EXPECT_THROW(Seminorm::euclidean(0), DomainError);
  EXPECT_THROW(Seminorm::scale(-1.0, Seminorm::euclidean(2)), DomainError);
  EXPECT_THROW(Seminorm::max_of({}), DomainError);
  EXPECT_THROW(Seminorm::sum({Seminorm::euclidean(2), Seminorm::euclidean(3)}), DomainError);
  EXPECT_THROW(Seminorm::line_quotient(Seminorm::euclidean(2), {0.0, 0.0}), DomainError);
  EXPECT_THROW(Seminorm::line_quotient(Seminorm::euclidean(2), {1.0}), DomainError);
  // base vanishes along the direction
  EXPECT_THROW(Seminorm::line_quotient(Seminorm::abs_linear({1.0, 0.0}), {0.0, 1.0}), DomainError);
  EXPECT_THROW((void)Seminorm::euclidean(2)(std::vector<double>{1.0}), DomainError);
}

TEST(Seminorm, LineQuotientAgainstClosedForms) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (std::size_t d : {2u, 3u, 4u})
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> x(d), v(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = u(rng);
        v[i] = u(rng);
      }
      const double e = Seminorm::line_quotient(Seminorm::euclidean(d), v)(x);
      const double m = Seminorm::line_quotient(max_abs_norm(d), v)(x);
      const double l = Seminorm::line_quotient(l1_norm(d), v)(x);
      const double scale = 1.0 + oracle::max_abs(x);
      EXPECT_NEAR(e, oracle::line_quotient_euclidean(x, v), 1e-10 * scale);
      EXPECT_NEAR(m, oracle::line_quotient_max_abs(x, v), 1e-10 * scale);
      EXPECT_NEAR(l, oracle::line_quotient_l1(x, v), 1e-10 * scale * static_cast<double>(d));
    }
}

TEST(Seminorm, RandomTreesAreSeminorms) {
  sampling::Rng rng(37);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = 2 + sampling::index(rng, 3);
    const Seminorm nu = sampling::seminorm(rng, d, 3);
    const auto x = sampling::vector(rng, d, -3.0, 3.0);
    const auto y = sampling::vector(rng, d, -3.0, 3.0);
    const double t = sampling::uniform(rng, -4.0, 4.0);
    std::vector<double> tx(d), xy(d);
    for (std::size_t i = 0; i < d; ++i) {
      tx[i] = t * x[i];
      xy[i] = x[i] + y[i];
    }
    const double L = nu.euclidean_bound();
    const double sx = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    const double sy = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    EXPECT_GE(nu(x), 0.0);
    EXPECT_NEAR(nu(tx), std::abs(t) * nu(x), 1e-12 * std::abs(t) * L * sx);
    EXPECT_LE(nu(xy), nu(x) + nu(y) + 1e-12 * L * (sx + sy));
    EXPECT_LE(nu(x), L * sx * (1.0 + 1e-12));
  }
}

TEST(Golden, Parabola) {
  const auto m = golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3) + 2.0; }, -1.0, 1.0);
  EXPECT_NEAR(m.argmin, 0.3, 1e-8);
  EXPECT_NEAR(m.value, 2.0, 1e-15);
  EXPECT_THROW(golden_section_minimize([](double t) { return t; }, 1.0, -1.0), DomainError);
}

TEST(Golden, KinkAtBoundary) {
  const auto m = golden_section_minimize([](double t) { return std::abs(t - 1.0); }, -1.0, 1.0, 200, 0.0);
  EXPECT_NEAR(m.value, 0.0, 1e-14);
}
