#pragma once

// The invariant suite: every module's properties on seeded random instances.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wellpose/objectives.hpp"
#include "wellpose/parametric.hpp"
#include "wellpose/perturbation.hpp"
#include "wellpose/sampling.hpp"
#include "wellpose/seminorm.hpp"
#include "wellpose/spaces.hpp"
#include "wellpose/steckin.hpp"

namespace wellpose {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  [[nodiscard]] bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

using sampling::Rng;

inline CheckResult check_spaces(Rng& rng) {
  for (int trial = 0; trial < 50; ++trial) {
    SpaceRef s = sampling::point_cloud(rng, 2 + sampling::index(rng, 40), 2);
    const std::size_t c = sampling::index(rng, s->size());
    double e1 = sampling::uniform(rng, 0.0, 1.0), e2 = sampling::uniform(rng, 0.0, 1.0);
    if (e1 > e2) std::swap(e1, e2);
    if (!ball(s, c, e1).is_subset_of(ball(s, c, e2))) return {"spaces", false, "ball monotonicity"};
    if (diam(ball(s, c, e2)) > 2.0 * e2) return {"spaces", false, "diam(ball) > 2 eps"};
    const PointSubset a = ball(s, c, e1);
    const PointSubset b = ball(s, sampling::index(rng, s->size()), e2);
    if (set_distance(a, b) != set_distance(b, a)) return {"spaces", false, "set_distance asymmetric"};
  }
  return {"spaces", true, ""};
}

inline CheckResult check_objectives(Rng& rng) {
  for (int trial = 0; trial < 100; ++trial) {
    SpaceRef s = sampling::point_cloud(rng, 2 + sampling::index(rng, 40), 2);
    const ObjectiveFunction f = sampling::objective(rng, s);
    double e1 = sampling::uniform(rng, 0.0, 1.0), e2 = sampling::uniform(rng, 0.0, 1.0);
    if (e1 > e2) std::swap(e1, e2);
    if (!argmin_set(f, e1).is_subset_of(argmin_set(f, e2))) return {"objectives", false, "argmin not monotone"};
    const PointSubset exact = argmin_set(f, 0.0);
    for (std::size_t i : exact.members())
      if (f[i] != ExtendedReal(f.min_value())) return {"objectives", false, "argmin(f,0) not exact"};
    const ObjectiveFunction twice = regularize(regularize(f, e1), e2);
    const ObjectiveFunction once = regularize(f, e1 + e2);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (twice[i] < once[i]) return {"objectives", false, "(f_a)_b < f_(a+b)"};
    const double eps = sampling::uniform(rng, 0.01, 1.0);
    const auto g = sampling::perturbation(rng, s, 0.99 * eps / 3.0);
    if (!check_cont_eps_lemma(f, g, eps).holds) return {"objectives", false, "cont-eps inclusion"};
    // below the smallest positive value gap the modulus equals diam of the exact argmin
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i].is_finite() && f[i].value() > f.min_value()) gap = std::min(gap, f[i].value() - f.min_value());
    if (std::isfinite(gap) && diam(argmin_set(f, gap / 2.0)) != diam(argmin_set(f, 0.0)))
      return {"objectives", false, "modulus below the gap"};
  }
  return {"objectives", true, ""};
}

inline CheckResult check_parametric() {
  const ParametricFamily fam = vime_family(999, 100);
  for (double eps : {0.1, 0.3, 0.49})
    if (!no_continuous_selection_demo(fam, eps).all_hold()) return {"parametric", false, "vime claims"};
  const auto v = value_function(fam);
  for (std::size_t p = 0; p + 1 < v.size(); ++p)
    if (std::abs(v[p] - v[p + 1]) > fam.params().dist(p, p + 1) + 1e-12) return {"parametric", false, "V not 1-Lipschitz"};
  for (std::size_t p : {std::size_t{0}, std::size_t{50}, std::size_t{100}}) {
    const auto c2 = check_cond2(fam, p, 0.1);
    if (!c2.found() || !replay_certificate(fam, c2)) return {"parametric", false, "cond2 certificate"};
    const auto c1 = check_cond1(fam, p, 500, 0.1);
    if (!c1.found() || !replay_certificate(fam, c1)) return {"parametric", false, "cond1 certificate"};
    if (!value_continuity(fam, p, 0.05).delta) return {"parametric", false, "value continuity"};
  }
  if (!check_5r_lemma(fam, 0, 0.1, 0.05).delta) return {"parametric", false, "5r lemma at p=0"};
  return {"parametric", true, ""};
}

inline CheckResult check_perturbation(Rng& rng) {
  for (int trial = 0; trial < 50; ++trial) {
    SpaceRef s = sampling::point_cloud(rng, 2 + sampling::index(rng, 40), 2);
    const ObjectiveFunction f = sampling::objective(rng, s);
    const auto g = sampling::perturbation(rng, s, 0.5);
    const double eps = sampling::uniform(rng, 0.01, 1.0);
    const auto step = buc_density_step(f, g, eps);
    // the bump reaches height eps only if some point is at distance >= eps/2 from the anchor
    bool reaches = false;
    for (std::size_t x = 0; x < s->size(); ++x) reaches = reaches || s->dist(x, step.anchor) >= eps / 2.0;
    if (reaches ? step.distance_moved != eps : step.distance_moved > eps)
      return {"perturbation", false, "density step moved != eps"};
    if (!(step.achieved_diam <= eps)) return {"perturbation", false, "density step diam > eps"};
    for (std::size_t n = 2; n <= 8; ++n)
      if (mn_membership(f, g, n).member && !mn_membership(f, g, n - 1).member) return {"perturbation", false, "M_n not monotone"};
    const double radius = openness_radius(f, g, eps, 1.0);
    for (int k = 0; k < 20; ++k) {
      const auto h = sampling::perturbation(rng, s, 0.99 * radius);
      const auto chk = check_openness_contract(f, g, g + h, eps, 1.0, h.sup_norm());
      if (chk.applicable && !chk.holds) return {"perturbation", false, "openness contract"};
    }
  }
  return {"perturbation", true, ""};
}

inline CheckResult check_seminorms(Rng& rng) {
  using K = Seminorm::Kind;
  for (K kind : {K::abs_linear, K::euclidean, K::max_of, K::sum, K::scale, K::line_quotient})
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t d = 2 + sampling::index(rng, 2);
      const Seminorm nu = sampling::seminorm_of_kind(rng, kind, d);
      const auto x = sampling::vector(rng, d, -10.0, 10.0);
      const auto y = sampling::vector(rng, d, -10.0, 10.0);
      const double t = sampling::uniform(rng, -10.0, 10.0);
      std::vector<double> tx(d), xy(d);
      double nx = 0.0, ny = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        tx[i] = t * x[i];
        xy[i] = x[i] + y[i];
        nx += x[i] * x[i];
        ny += y[i] * y[i];
      }
      const double L = nu.euclidean_bound();
      if (std::abs(nu(tx) - std::abs(t) * nu(x)) > 1e-12 * std::abs(t) * L * std::sqrt(nx))
        return {"seminorms", false, "homogeneity"};
      if (nu(xy) > nu(x) + nu(y) + 1e-12 * L * (std::sqrt(nx) + std::sqrt(ny))) return {"seminorms", false, "triangle"};
      if (!(nu(x) >= 0.0) || !std::isfinite(nu(x))) return {"seminorms", false, "nonnegativity"};
    }
  return {"seminorms", true, ""};
}

inline CheckResult check_steckin(Rng& rng) {
  const NormedSetting s = NormedSetting::make(max_abs_norm(2), 1e-3);
  for (int trial = 0; trial < 10; ++trial) {
    const Seminorm a = sampling::seminorm(rng, 2, 2) + sampling::norm(rng, 2);
    const Seminorm b = sampling::seminorm(rng, 2, 2) + sampling::norm(rng, 2);
    const Seminorm c = sampling::seminorm(rng, 2, 1);
    const RhoEstimate ab = rho(a, b, s), ba = rho(b, a, s);
    if (ab.value != ba.value || rho(a, a, s).value != 0.0) return {"steckin", false, "rho symmetry / self-distance"};
    const RhoEstimate ac = rho(a, c, s), cb = rho(c, b, s);
    if (ab.value > ac.value + cb.value + ab.error_bound + ac.error_bound + cb.error_bound)
      return {"steckin", false, "rho triangle"};
    const RhoEstimate shifted = rho(a + c, b + c, s);
    if (std::abs(shifted.value - ab.value) > shifted.error_bound + ab.error_bound) return {"steckin", false, "rho translation"};
    if (!n0_open_check(a, b, s).holds) return {"steckin", false, "N0-open inequality"};
    if (certified_equivalent(a, s) && !certified_equivalent(a + c, s)) return {"steckin", false, "N + N0 closure"};
  }
  const ConvexBody m = ConvexBody::segment({-1.0, 0.0}, {1.0, 0.0}, 2001);
  const WellposeReport wp = wellpose_point(s.base(), m, {0.0, 2.0}, 0.2, s);
  if (!wp.success || !(wp.moved.value <= 0.2 + wp.moved.error_bound)) return {"steckin", false, "wellpose_point"};
  const auto replay = metric_projection(wp.nu_prime, m, std::vector<double>{0.0, 2.0}, {wp.delta}, s);
  if (replay.diam_values.front() != wp.achieved_diam) return {"steckin", false, "wellpose_point replay"};
  const std::vector<std::vector<double>> W{{0.0, 2.0}, {0.5, 2.0}, {-0.5, -2.0}};
  const RenormReport r = baire_renorm(s.base(), m, W, 0.3, 5, s);
  if (r.status != RenormStatus::success || !r.replay_ok) return {"steckin", false, "baire_renorm"};
  if (!ablation_replay(r, s.base(), m, W, 5, s).any_necessary()) return {"steckin", false, "ablation"};
  return {"steckin", true, ""};
}

}  // namespace detail

/// Runs every check. `inject_fault` adds a deliberately false claim (the
/// p = 1/2 vime member has ε-argmin points right of 2/3), for exercising the
/// failure path.
inline SuiteReport run_invariant_suite(std::uint64_t seed, bool inject_fault = false) {
  detail::Rng rng(seed);
  SuiteReport rep;
  rep.checks.push_back(detail::check_spaces(rng));
  rep.checks.push_back(detail::check_objectives(rng));
  rep.checks.push_back(detail::check_parametric());
  rep.checks.push_back(detail::check_perturbation(rng));
  rep.checks.push_back(detail::check_seminorms(rng));
  rep.checks.push_back(detail::check_steckin(rng));
  if (inject_fault) {
    const ParametricFamily fam = vime_family(999, 100);
    const PointSubset omega = argmin_set(fam.member(50), 0.1);
    bool left_only = true;
    for (std::size_t i : omega.members()) left_only = left_only && 3 * i <= 999;
    rep.checks.push_back({"injected_fault", left_only, "claims Omega_{f_1/2}(0.1) within [0,1/3]"});
  }
  return rep;
}

}  // namespace wellpose
