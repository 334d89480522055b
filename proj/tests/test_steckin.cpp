#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wellpose/perturbation.hpp"
#include "wellpose/steckin.hpp"

using namespace wellpose;
using fixtures::max_abs_setting;

namespace {

const std::vector<double> kAbove{0.0, 2.0};

}  // namespace

TEST(Setting, MeshAndErrors) {
  const auto& s = max_abs_setting();
  EXPECT_LE(s.mesh(), 1e-3);
  for (std::size_t i = 0; i < s.sample_size(); i += 97) EXPECT_NEAR(s.base()(s.sample(i)), 1.0, 1e-14);
  EXPECT_THROW(NormedSetting::make(max_abs_norm(2), 0.0), DomainError);
  EXPECT_THROW(NormedSetting::make(max_abs_norm(2), 0.7), DomainError);
  EXPECT_THROW(NormedSetting::make(max_abs_norm(4), 0.1), DomainError);
  const auto s3 = NormedSetting::make(Seminorm::euclidean(3), 0.05);
  EXPECT_LE(s3.mesh(), 0.05);
  for (std::size_t i = 0; i < s3.sample_size(); i += 13) EXPECT_NEAR(s3.base()(s3.sample(i)), 1.0, 1e-14);
}

TEST(Sphere, KnuExamples) {
  const auto& s = max_abs_setting();
  const auto k = k_nu(s.base(), s);
  EXPECT_EQ(k.value, 1.0);
  EXPECT_LE(k.lower, 1.0);
  EXPECT_GE(k.upper, 1.0);
  EXPECT_EQ(k_nu(2.0 * s.base(), s).value, 2.0);
  const auto k1 = k_nu(l1_norm(2), s);
  EXPECT_EQ(k1.value, 2.0);  // corners are sampled
  EXPECT_NEAR(k1.value, oracle::square_sup([](double a, double b) { return std::abs(a) + std::abs(b); }), 1e-12);
}

TEST(Sphere, AnuExamples) {
  const auto& s = max_abs_setting();
  EXPECT_EQ(a_nu(s.base(), s).value, 1.0);
  const auto a1 = a_nu(l1_norm(2), s);
  EXPECT_EQ(a1.value, 1.0);
  EXPECT_LE(a1.lower, 1.0);
  EXPECT_GT(a1.lower, 0.99);
  EXPECT_TRUE(certified_equivalent(l1_norm(2), s));
  const auto deg = a_nu(Seminorm::abs_linear({1.0, 0.0}), s);
  EXPECT_EQ(deg.value, 0.0);
  EXPECT_FALSE(certified_equivalent(Seminorm::abs_linear({1.0, 0.0}), s));
}

TEST(Sphere, RhoExamples) {
  const auto& s = max_abs_setting();
  EXPECT_EQ(rho(l1_norm(2), l1_norm(2), s).value, 0.0);
  const auto r = rho(l1_norm(2), s.base(), s);
  EXPECT_LE(std::abs(r.value - 1.0), r.error_bound);
  const double eps = 0.125;
  const auto moved = rho(l1_norm(2) + Seminorm::scale(eps, s.base()), l1_norm(2), s);
  EXPECT_LE(std::abs(moved.value - eps), 1e-15 + moved.error_bound);
  EXPECT_THROW(rho(Seminorm::euclidean(3), s.base(), s), DomainError);
}

TEST(Sphere, RhoAgainstSquareSweep) {
  const auto& s = max_abs_setting();
  const Seminorm a = Seminorm::line_quotient(Seminorm::euclidean(2), {1.0, 2.0}) + Seminorm::abs_linear({0.3, -1.0});
  const Seminorm b = Seminorm::scale(1.5, Seminorm::euclidean(2));
  const auto r = rho(a, b, s);
  const double want = oracle::square_sup([&](double x, double y) {
    const std::vector<double> v{x, y};
    return std::abs(a(v) - b(v));
  });
  EXPECT_LE(std::abs(r.value - want), r.error_bound);
}

TEST(N0Open, Examples) {
  const auto& s = max_abs_setting();
  const Seminorm nu = l1_norm(2);
  const auto same = n0_open_check(nu, nu, s);
  EXPECT_TRUE(same.holds);
  EXPECT_EQ(same.margin, a_nu(nu, s).value);
  const auto bumped = n0_open_check(nu, nu + Seminorm::scale(0.3, s.base()), s);
  EXPECT_TRUE(bumped.holds);
  EXPECT_TRUE(bumped.prime_equivalent);
  EXPECT_GE(bumped.margin, 1.0 - 0.3 - bumped.tolerance);
}

TEST(Body, SegmentAndPolytope) {
  const auto seg = fixtures::unit_segment();
  EXPECT_EQ(seg.sample_size(), 2001u);
  EXPECT_NEAR(seg.mesh(), 0.0005, 1e-15);
  EXPECT_TRUE(seg.contains(std::vector<double>{0.25, 0.0}));
  EXPECT_FALSE(seg.contains(kAbove));
  EXPECT_NEAR(seg.distance_to_polytope(kAbove), 2.0, 1e-12);

  EXPECT_NO_THROW(ConvexBody::polytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 0.1));
  const auto sq = ConvexBody::polytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 0.1);
  for (std::size_t i = 0; i < sq.sample_size(); ++i) ASSERT_TRUE(sq.contains(sq.sample(i)));
  EXPECT_TRUE(sq.contains(std::vector<double>{0.3, -0.99}));
  EXPECT_NEAR(sq.distance_to_polytope(std::vector<double>{3.0, 4.0}), std::hypot(2.0, 3.0), 1e-12);
  EXPECT_THROW(ConvexBody::segment({0.0}, {1.0, 0.0}, 5), DomainError);
}

TEST(Projection, PointInSample) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  const auto r = metric_projection(s.base(), seg, std::vector<double>{0.5, 0.0}, {0.0}, s);
  EXPECT_EQ(r.dist, 0.0);
  EXPECT_NE(std::find(r.argmin.begin(), r.argmin.end(), std::size_t{1500}), r.argmin.end());
}

TEST(Projection, MaxAbsSegmentIsIllPosed) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  const auto r = metric_projection(s.base(), seg, kAbove, {0.0, 0.1}, s);
  EXPECT_EQ(r.dist, 2.0);
  EXPECT_EQ(r.argmin.size(), 2001u);
  EXPECT_EQ(r.diam_values[0], 2.0);
  EXPECT_EQ(r.set_sizes[0], 2001u);
}

TEST(Projection, EuclideanUniqueAndBruteForce) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  const std::vector<double> grid{0.0, 1e-4, 1e-2, 0.3};
  const auto r = metric_projection(Seminorm::euclidean(2), seg, kAbove, grid, s);
  EXPECT_EQ(r.dist, 2.0);
  EXPECT_EQ(r.argmin, std::vector<std::size_t>{1000});
  EXPECT_EQ(r.diam_values[0], 0.0);
  // brute force over the sample: sublevel set and its max-abs diameter
  std::vector<double> v(seg.sample_size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::hypot(seg.sample(i)[0], 2.0 - seg.sample(i)[1]);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto idx = oracle::sublevel(v, grid[k]);
    const double d = oracle::diam(idx, [&](std::size_t i, std::size_t j) {
      return std::max(std::abs(seg.sample(i)[0] - seg.sample(j)[0]), std::abs(seg.sample(i)[1] - seg.sample(j)[1]));
    });
    EXPECT_EQ(r.diam_values[k], d) << "delta=" << grid[k];
    EXPECT_EQ(r.set_sizes[k], idx.size());
  }
}

TEST(Projection, COfP) {
  const auto& s = max_abs_setting();
  EXPECT_EQ(c_of_p(fixtures::unit_segment(), kAbove, s), 2.0);
  const auto sq = ConvexBody::polytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 0.25);
  EXPECT_LE(c_of_p(sq, std::vector<double>{0.0, 0.0}, s), 2.0);
}

TEST(Perturb, StechSeminorm) {
  const auto& s = max_abs_setting();
  const Seminorm nu = Seminorm::euclidean(2);
  const std::vector<double> xs{1.0, 2.0};
  const Seminorm out = stech_perturb_seminorm(nu, xs, 0.2, s);
  EXPECT_NEAR(out(xs), nu(xs), 1e-12);
  const std::vector<double> y{-3.0, 0.5};
  EXPECT_NEAR(out(y), nu(y) + 0.2 * oracle::line_quotient_max_abs(y, xs), 1e-12);
  const auto moved = rho(out, nu, s);
  EXPECT_LE(moved.value, 0.2 + moved.error_bound);
  EXPECT_THROW(stech_perturb_seminorm(nu, xs, 0.0, s), DomainError);
}

TEST(Wellpose, InsideBody) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  const std::vector<double> p{0.25, 0.0};
  const auto r = wellpose_point(s.base(), seg, p, 0.2, s);
  EXPECT_EQ(r.branch, WellposeBranch::inside);
  ASSERT_TRUE(r.success);
  EXPECT_LT(r.achieved_diam, 0.2);
  EXPECT_EQ(r.projection.argmin, std::vector<std::size_t>{1250});
  EXPECT_LE(r.moved.value, 0.2 + r.moved.error_bound);
}

TEST(Wellpose, IllPosedSegment) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  const auto r = wellpose_point(s.base(), seg, kAbove, 0.2, s);
  ASSERT_TRUE(r.success);
  EXPECT_GT(r.delta, 0.0);
  EXPECT_LT(r.achieved_diam, 0.2);
  // independent replay of the emitted norm
  std::vector<double> v(seg.sample_size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = r.nu_prime(std::vector<double>{kAbove[0] - seg.sample(i)[0], kAbove[1] - seg.sample(i)[1]});
  const auto idx = oracle::sublevel(v, r.delta);
  const double d = oracle::diam(idx, [&](std::size_t i, std::size_t j) { return std::abs(seg.sample(i)[0] - seg.sample(j)[0]); });
  EXPECT_EQ(d, r.achieved_diam);
  const auto moved = rho(r.nu_prime, s.base(), s);
  EXPECT_LE(moved.value, 0.2 + moved.error_bound);
  EXPECT_LE(r.moved.value, 0.2 + r.moved.error_bound);
}

TEST(Wellpose, EuclideanAlreadyWellPosed) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  const auto r = wellpose_point(Seminorm::euclidean(2), seg, kAbove, 0.2, s, {1e-8});
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.delta, 1e-8);
  EXPECT_EQ(r.achieved_diam, 0.0);
}

TEST(Renorm, ThreeWitnesses) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  const std::vector<std::vector<double>> W{{0.0, 2.0}, {0.5, 2.0}, {-0.5, -2.0}};
  const auto rep = baire_renorm(s.base(), seg, W, 0.3, 5, s);
  ASSERT_EQ(rep.status, RenormStatus::success);
  EXPECT_TRUE(rep.replay_ok);
  ASSERT_EQ(rep.moduli.size(), 3u);
  for (const auto& pm : rep.moduli) {
    EXPECT_TRUE(pm.ok);
    EXPECT_LT(pm.diam, 0.2);
  }
  EXPECT_LE(rep.move_bound, 0.3);
  EXPECT_LE(rep.total_move.value, 0.3 + rep.total_move.error_bound);
  EXPECT_GT(rep.a_final.lower, 0.0);
  EXPECT_LE(rep.ledger.remaining, rep.ledger.total);
  EXPECT_TRUE(ablation_replay(rep, s.base(), seg, W, 5, s).any_necessary());
}

TEST(Renorm, BudgetPreconditions) {
  const auto& s = max_abs_setting();
  const auto seg = fixtures::unit_segment();
  EXPECT_THROW(baire_renorm(s.base(), seg, {{0.0, 2.0}}, 1.5, 5, s), PreconditionError);
  EXPECT_THROW(baire_renorm(s.base(), seg, {}, 0.3, 5, s), DomainError);
}

TEST(SteckinAxioms, DominationWithCOfP) {
  const auto s = NormedSetting::make(max_abs_norm(2), 0.01);
  const auto seg = ConvexBody::segment({-1.0, 0.0}, {1.0, 0.0}, 101);
  const std::vector<std::vector<double>> P{{0.0, 2.0}, {0.5, 1.0}, {-0.5, -2.0}};
  const SteckinSpace space(s, seg, P);
  EXPECT_EQ(*space.declared_constant(0), 2.0);
  const std::vector<Seminorm> samples{max_abs_norm(2), l1_norm(2), Seminorm::euclidean(2)};
  const auto rep = check_pert_axioms(space, samples, space.zero_family(), {0, 1, 2}, {0.2});
  EXPECT_TRUE(rep.metric_pass) << rep.metric_witness;
  EXPECT_TRUE(rep.bounded_pass);
  EXPECT_TRUE(rep.domination_pass);
  for (const auto& c : rep.constants) EXPECT_LE(c.required, c.declared.value_or(-1.0) * (1.0 + 1e-12));
  EXPECT_TRUE(rep.density_pass);
}
