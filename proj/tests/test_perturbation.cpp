#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wellpose/parametric.hpp"
#include "wellpose/perturbation.hpp"

using namespace wellpose;

namespace {

SpaceRef two_points() { return share(FiniteMetricSpace::grid1d(0.0, 1.0, 1)); }

}  // namespace

TEST(Cone, Values) {
  auto s = share(FiniteMetricSpace::grid1d(0.0, 1.0, 10));
  const auto u = cone_perturbation(s, 2, 0.6, 0.4);
  EXPECT_EQ(u[2], 0.0);
  EXPECT_DOUBLE_EQ(u[4], 0.3);  // d = γ/2
  EXPECT_EQ(u[6], 0.6);         // d = γ
  EXPECT_EQ(u[10], 0.6);
  EXPECT_THROW(cone_perturbation(s, 0, 0.0, 1.0), DomainError);
  EXPECT_THROW(cone_perturbation(s, 0, 1.0, -1.0), DomainError);
}

TEST(Density, TwoPointExample) {
  auto s = two_points();
  const auto step = buc_density_step(ObjectiveFunction::constant(s, 0.0), PerturbationFunction::zero(s), 0.6);
  EXPECT_EQ(step.anchor, 0u);
  EXPECT_EQ(step.g_prime[0], 0.0);
  EXPECT_EQ(step.g_prime[1], 0.6);
  EXPECT_EQ(step.delta, 0.3);
  EXPECT_EQ(step.achieved_diam, 0.0);
  EXPECT_EQ(step.distance_moved, 0.6);
  EXPECT_EQ(argmin_set(ObjectiveFunction::constant(s, 0.0) + step.g_prime, 0.3).members(), std::vector<std::size_t>{0});
}

TEST(Density, UniqueMinimizerStays) {
  auto s = share(FiniteMetricSpace::grid1d(0.0, 1.0, 20));
  std::vector<double> v(21, 1.0);
  v[13] = 0.0;
  const auto step = buc_density_step(ObjectiveFunction::from_doubles(s, v), PerturbationFunction::zero(s), 0.2);
  EXPECT_EQ(step.anchor, 13u);
  EXPECT_EQ(step.achieved_diam, 0.0);
}

TEST(Density, RandomInstancesAgainstOracle) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 50;
    std::vector<std::vector<double>> pts(n, std::vector<double>(2));
    for (auto& p : pts)
      for (double& c : p) c = 3.0 * u(rng);
    auto s = share(FiniteMetricSpace::point_cloud(pts, Metric::euclidean));
    std::vector<double> fv(n), gv(n);
    for (std::size_t i = 0; i < n; ++i) {
      fv[i] = u(rng);
      gv[i] = u(rng) - 0.5;
    }
    const double eps = 0.05 + u(rng);
    const auto step = buc_density_step(ObjectiveFunction::from_doubles(s, fv), PerturbationFunction(s, gv), eps);
    // independent replay: sup|g'-g| and the diameter of the eps/2 sublevel set
    double moved = 0.0;
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
      moved = std::max(moved, std::abs(step.g_prime[i] - gv[i]));
      h[i] = fv[i] + step.g_prime[i];
    }
    const auto omega = oracle::sublevel(h, eps / 2.0);
    const double d = oracle::diam(omega, [&](std::size_t i, std::size_t j) { return s->dist(i, j); });
    EXPECT_EQ(d, step.achieved_diam);
    EXPECT_LE(d, eps);
    bool reaches = false;
    for (std::size_t x = 0; x < n; ++x) reaches = reaches || s->dist(x, step.anchor) >= eps / 2.0;
    if (reaches) {
      EXPECT_EQ(step.distance_moved, eps);
    }
    EXPECT_LE(moved, eps * (1.0 + 1e-15));
  }
}

TEST(Mn, Examples) {
  auto s = two_points();
  const auto flat = ObjectiveFunction::constant(s, 0.0);
  EXPECT_FALSE(mn_membership(flat, PerturbationFunction::zero(s), 1).member);

  auto g = share(FiniteMetricSpace::grid1d(0.0, 1.0, 10));
  std::vector<double> v(11, 1.0);
  v[4] = 0.0;
  const auto sharp = ObjectiveFunction::from_doubles(g, v);
  for (std::size_t n : {1u, 5u, 1000u}) EXPECT_TRUE(mn_membership(sharp, PerturbationFunction::zero(g), n).member);

  const auto step = buc_density_step(flat, PerturbationFunction::zero(s), 0.4);
  const auto m = mn_membership(flat, step.g_prime, 2, {0.2, 0.1});
  EXPECT_TRUE(m.member);
  EXPECT_EQ(m.witness_t.value_or(-1.0), 0.2);
}

TEST(Openness, RadiusFormula) {
  auto s = two_points();
  const auto f = ObjectiveFunction::constant(s, 0.0);
  EXPECT_DOUBLE_EQ(openness_radius(f, PerturbationFunction::zero(s), 0.3, 1.0), 0.1);
  EXPECT_THROW(openness_radius(f, PerturbationFunction::zero(s), 0.3, 0.0), DomainError);
}

TEST(Openness, ContractInsideRadius) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = share(FiniteMetricSpace::grid1d(0.0, 1.0, 30));
    std::vector<double> fv(31), gv(31);
    for (std::size_t i = 0; i < 31; ++i) {
      fv[i] = u(rng);
      gv[i] = 0.1 * u(rng);
    }
    const auto f = ObjectiveFunction::from_doubles(s, fv);
    const PerturbationFunction g(s, gv);
    const double eps = 0.3;
    const double r = openness_radius(f, g, eps, 1.0);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> hv(31);
      for (double& x : hv) x = (2.0 * u(rng) - 1.0) * 0.9 * r;
      const PerturbationFunction h(s, hv);
      const auto chk = check_openness_contract(f, g, g + h, eps, 1.0, h.sup_norm());
      ASSERT_TRUE(chk.applicable);
      EXPECT_TRUE(chk.holds);
    }
  }
}

TEST(Openness, OutsideRadiusIsNotApplicable) {
  // two points: 0 wins by 0.25, a shift of 0.2 each way flips them
  auto s = two_points();
  const auto f = ObjectiveFunction::from_doubles(s, {0.0, 0.25});
  const auto g = PerturbationFunction::zero(s);
  const PerturbationFunction g2(s, {0.2, -0.2});
  const auto chk = check_openness_contract(f, g, g2, 0.2, 1.0, 0.2);
  EXPECT_FALSE(chk.applicable);
  EXPECT_FALSE(chk.holds);
}

TEST(Axioms, ConstantBucFamilyPasses) {
  const auto fam = vime_family(60, 10);
  std::vector<PerturbationFamily> samples;
  for (std::size_t a : {0u, 20u, 45u})
    samples.push_back(PerturbationFamily::constant(fam.params(), cone_perturbation(fam.domain(), a, 0.3, 0.2)));
  const auto rep = check_pert_axioms(BucSpace{}, samples, fam, {0, 5, 10}, {0.2, 0.05});
  EXPECT_TRUE(rep.all_pass()) << rep.metric_witness;
  for (const auto& c : rep.constants) EXPECT_EQ(c.declared.value_or(-1.0), 1.0);
}

namespace {

// ρ(g,h) = |g(0)² - h(0)²| is not translation invariant
struct SquaredSpace : BucSpace {
  [[nodiscard]] Distance rho(const PerturbationFamily& a, const PerturbationFamily& b) const {
    const double x = a.member(0)[0], y = b.member(0)[0];
    return {std::abs(x * x - y * y), 0.0};
  }
};

}  // namespace

TEST(Axioms, BrokenMetricFailsPrecheck) {
  const auto fam = vime_family(30, 5);
  std::vector<PerturbationFamily> samples;
  for (double c : {0.0, 0.5, 1.0})
    samples.push_back(PerturbationFamily::constant(fam.params(), PerturbationFunction(fam.domain(), std::vector<double>(31, c))));
  const auto rep = check_pert_axioms(SquaredSpace{}, samples, fam, {0}, {0.2});
  EXPECT_FALSE(rep.metric_pass);
  EXPECT_FALSE(rep.metric_witness.empty());
}
