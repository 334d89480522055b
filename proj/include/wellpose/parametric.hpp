#pragma once

// Parametric families f_p: value function, uniform epi-continuity certificates,
// the 5r propagation lemma, upper semicontinuity of the argmin, and the
// three-piece family on [0,1] whose ε-argmin map admits no continuous selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wellpose/error.hpp"
#include "wellpose/family.hpp"
#include "wellpose/objectives.hpp"
#include "wellpose/perturbation.hpp"
#include "wellpose/spaces.hpp"

namespace wellpose {

/// V(p) = inf_x f_p(x), exact.
inline std::vector<double> value_function(const ParametricFamily& fam) {
  std::vector<double> v;
  v.reserve(fam.param_count());
  for (const auto& f : fam.members()) v.push_back(inf_value(f));
  return v;
}

/// Re-checkable certificate for condition (1) at (p, x, ε) or condition (2) at (p, ε).
struct EpiCertificate {
  int condition = 1;
  std::size_t p = 0;
  double eps = 0.0;
  std::optional<std::size_t> x;     // condition 1 only
  std::optional<double> delta;      // nullopt = FAIL
  bool vacuous = false;             // condition 1 with f_p(x) = +inf
  std::vector<std::pair<std::size_t, std::size_t>> witnesses;  // (q, x_q), condition 1
  std::optional<std::size_t> failing_q;  // offending parameter at the smallest δ tried
  std::optional<std::size_t> failing_x;

  [[nodiscard]] bool found() const { return delta.has_value(); }
};

/// δ = ε / L for families that are L-Lipschitz in p: then x_q = x satisfies
/// condition (1) and f_q >= f_p - ε >= (f_p)_ε - ε gives condition (2).
inline std::optional<double> analytic_delta(const ParametricFamily& fam, double eps) {
  if (!fam.lipschitz_in_p()) return std::nullopt;
  return eps / *fam.lipschitz_in_p();
}

/// Condition (1): largest grid δ such that every q in B_δ(p) has some
/// x_q in B_ε(x) with f_q(x_q) <= f_p(x) + ε.
inline EpiCertificate check_cond1(const ParametricFamily& fam, std::size_t p, std::size_t x, double eps,
                                  const std::vector<double>& delta_grid = {}) {
  if (!(eps > 0.0)) throw DomainError("check_cond1: eps must be positive");
  if (p >= fam.param_count() || x >= fam.domain()->size()) throw DomainError("check_cond1: index out of range");
  EpiCertificate cert;
  cert.condition = 1;
  cert.p = p;
  cert.eps = eps;
  cert.x = x;
  const auto grid = effective_delta_grid(delta_grid, eps, fam.params().min_gap());
  const ExtendedReal& fx = fam.member(p)[x];
  if (fx.is_infinite()) {
    cert.vacuous = true;
    cert.delta = grid.front();
    return cert;
  }
  const ExtendedReal level(fx.value() + eps);
  const PointSubset near = ball(fam.domain(), x, eps);
  for (double delta : grid) {
    std::vector<std::pair<std::size_t, std::size_t>> wit;
    bool ok = true;
    for (std::size_t q : parameter_ball(fam.params(), p, delta)) {
      const auto& fq = fam.member(q);
      std::optional<std::size_t> xq;
      for (std::size_t y : near.members())
        if (fq[y] <= level) {
          xq = y;
          break;
        }
      if (!xq) {
        ok = false;
        cert.failing_q = q;
        break;
      }
      wit.emplace_back(q, *xq);
    }
    if (ok) {
      cert.delta = delta;
      cert.witnesses = std::move(wit);
      cert.failing_q.reset();
      return cert;
    }
  }
  return cert;
}

/// Condition (2): largest grid δ with f_q(x) >= (f_p)_ε(x) - ε for all x and
/// all q in B_δ(p).
inline EpiCertificate check_cond2(const ParametricFamily& fam, std::size_t p, double eps,
                                  const std::vector<double>& delta_grid = {}) {
  if (!(eps > 0.0)) throw DomainError("check_cond2: eps must be positive");
  if (p >= fam.param_count()) throw DomainError("check_cond2: index out of range");
  EpiCertificate cert;
  cert.condition = 2;
  cert.p = p;
  cert.eps = eps;
  const ObjectiveFunction reg = regularize(fam.member(p), eps);
  for (double delta : effective_delta_grid(delta_grid, eps, fam.params().min_gap())) {
    bool ok = true;
    for (std::size_t q : parameter_ball(fam.params(), p, delta)) {
      const auto& fq = fam.member(q);
      for (std::size_t x = 0; x < fq.size() && ok; ++x) {
        if (fq[x] < reg[x] - eps) {
          ok = false;
          cert.failing_q = q;
          cert.failing_x = x;
        }
      }
      if (!ok) break;
    }
    if (ok) {
      cert.delta = delta;
      cert.failing_q.reset();
      cert.failing_x.reset();
      return cert;
    }
  }
  return cert;
}

/// Re-evaluates a found certificate against the family.
inline bool replay_certificate(const ParametricFamily& fam, const EpiCertificate& cert) {
  if (!cert.delta) return false;
  const auto ball_q = parameter_ball(fam.params(), cert.p, *cert.delta);
  if (cert.condition == 1) {
    const ExtendedReal& fx = fam.member(cert.p)[*cert.x];
    if (fx.is_infinite()) return cert.vacuous;
    const ExtendedReal level(fx.value() + cert.eps);
    if (cert.witnesses.size() != ball_q.size()) return false;
    for (std::size_t k = 0; k < ball_q.size(); ++k) {
      const auto [q, xq] = cert.witnesses[k];
      if (q != ball_q[k]) return false;
      if (fam.domain()->dist(*cert.x, xq) > cert.eps) return false;
      if (!(fam.member(q)[xq] <= level)) return false;
    }
    return true;
  }
  const ObjectiveFunction reg = regularize(fam.member(cert.p), cert.eps);
  for (std::size_t q : ball_q)
    for (std::size_t x = 0; x < reg.size(); ++x)
      if (fam.member(q)[x] < reg[x] - cert.eps) return false;
  return true;
}

struct ValueContinuity {
  std::optional<double> delta;
  double worst = 0.0;  // max |V(q) - V(p)| over B_δ(p)
};

/// Largest grid δ with |V(q) - V(p)| <= ε on B_δ(p).
inline ValueContinuity value_continuity(const ParametricFamily& fam, std::size_t p, double eps,
                                        const std::vector<double>& delta_grid = {}) {
  const auto v = value_function(fam);
  ValueContinuity out;
  for (double delta : effective_delta_grid(delta_grid, eps, fam.params().min_gap())) {
    double worst = 0.0;
    for (std::size_t q : parameter_ball(fam.params(), p, delta)) worst = std::max(worst, std::abs(v[q] - v[p]));
    out.worst = worst;
    if (worst <= eps) {
      out.delta = delta;
      return out;
    }
  }
  return out;
}

struct FiveRReport {
  double eps = 0.0;
  double r = 0.0;
  double hypothesis_diam = 0.0;  // diam Ω_{f_p}(ε) < r
  std::optional<double> delta;
  double worst_diam = 0.0;  // max over q in B_δ(p) of diam Ω_{f_q}(δ)
};

/// Propagation lemma: from diam Ω_{f_p}(ε) < r find a grid δ with
/// diam Ω_{f_q}(δ) < 5r for all q in B_δ(p).
inline FiveRReport check_5r_lemma(const ParametricFamily& fam, std::size_t p, double eps, double r,
                                  const std::vector<double>& delta_grid = {}) {
  if (!(eps > 0.0) || !(r > 0.0)) throw DomainError("check_5r_lemma: eps and r must be positive");
  FiveRReport rep{eps, r, diam(argmin_set(fam.member(p), eps)), std::nullopt, 0.0};
  if (!(rep.hypothesis_diam < r)) throw PreconditionError("check_5r_lemma: need diam Omega_{f_p}(eps) < r");
  for (double delta : effective_delta_grid(delta_grid, eps, fam.params().min_gap())) {
    double worst = 0.0;
    for (std::size_t q : parameter_ball(fam.params(), p, delta)) worst = std::max(worst, diam(argmin_set(fam.member(q), delta)));
    rep.worst_diam = worst;
    if (worst < 5.0 * r) {
      rep.delta = delta;
      return rep;
    }
  }
  return rep;
}

struct UscReport {
  std::size_t minimizer = 0;
  std::optional<double> delta;
  bool holds = false;
};

/// Largest grid δ with Ω_{f_q}(δ) ⊆ B_ε(x_p) for every q in B_δ(p), where x_p
/// is the unique exact minimizer of f_p.
inline UscReport argmin_usc(const ParametricFamily& fam, std::size_t p, double eps, const std::vector<double>& delta_grid = {}) {
  if (!(eps > 0.0)) throw DomainError("argmin_usc: eps must be positive");
  const PointSubset exact = argmin_set(fam.member(p), 0.0);
  if (exact.size() != 1) throw PreconditionError("argmin_usc: f_p has more than one exact minimizer");
  UscReport rep;
  rep.minimizer = exact.members().front();
  const PointSubset target = ball(fam.domain(), rep.minimizer, eps);
  for (double delta : effective_delta_grid(delta_grid, eps, fam.params().min_gap())) {
    bool ok = true;
    for (std::size_t q : parameter_ball(fam.params(), p, delta))
      if (!argmin_set(fam.member(q), delta).is_subset_of(target)) {
        ok = false;
        break;
      }
    if (ok) {
      rep.delta = delta;
      rep.holds = true;
      return rep;
    }
  }
  return rep;
}

/// P = X = [0,1] on uniform grids; f_p = (1-p)(3x-1) on [0,1/3], 0 on
/// [1/3,2/3], p(2-3x) on [2/3,1]. Values are computed from the exact
/// rationals i/x_steps and j/p_steps with one final rounding.
inline ParametricFamily vime_family(std::size_t x_steps, std::size_t p_steps) {
  if (x_steps < 3 || p_steps < 3) throw DomainError("vime_family: steps must be >= 3");
  SpaceRef xs = share(FiniteMetricSpace::grid1d(0.0, 1.0, x_steps));
  SpaceRef ps = share(FiniteMetricSpace::grid1d(0.0, 1.0, p_steps));
  const auto kx = static_cast<std::int64_t>(x_steps);
  const auto kp = static_cast<std::int64_t>(p_steps);
  const double den = static_cast<double>(kx * kp);
  std::vector<ObjectiveFunction> table;
  table.reserve(p_steps + 1);
  for (std::int64_t j = 0; j <= kp; ++j) {
    std::vector<ExtendedReal> vals(x_steps + 1);
    for (std::int64_t i = 0; i <= kx; ++i) {
      std::int64_t num = 0;
      if (3 * i <= kx) num = (kp - j) * (3 * i - kx);
      else if (3 * i >= 2 * kx) num = j * (2 * kx - 3 * i);
      vals[static_cast<std::size_t>(i)] = ExtendedReal(static_cast<double>(num) / den + 0.0);
    }
    table.emplace_back(xs, std::move(vals));
  }
  // |f_p(x) - f_q(x)| = |p-q| |3x-1| or |p-q| |2-3x|, both factors <= 1
  return {ParameterGrid(ps), xs, std::move(table), 1.0};
}

struct SelectionGapRow {
  std::size_t p = 0;
  std::optional<std::size_t> left_max;   // largest member index with x <= 1/3
  std::optional<std::size_t> right_min;  // smallest member index with x >= 2/3
  std::size_t middle_count = 0;          // members with 1/3 < x < 2/3
};

struct SelectionGapReport {
  double eps = 0.0;
  bool f0_in_left = false;    // Ω_{f_0}(ε) ⊂ [0,1/3]
  bool f1_in_right = false;   // Ω_{f_1}(ε) ⊂ [2/3,1]
  bool middle_empty = false;  // Ω_{f_p}(ε) ∩ (1/3,2/3) = ∅ for every grid p
  double gap_lo = 0.0;        // no Ω_{f_p}(ε) meets (gap_lo, gap_hi)
  double gap_hi = 1.0;
  std::vector<SelectionGapRow> rows;

  [[nodiscard]] bool all_hold() const { return f0_in_left && f1_in_right && middle_empty; }
};

/// Verifies the three set claims on the grids with integer coordinate tests
/// (3i <= k, 3i >= 2k), so 1/3 and 2/3 are compared exactly.
inline SelectionGapReport no_continuous_selection_demo(const ParametricFamily& fam, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("no_continuous_selection_demo: eps must lie in (0, 1/2)");
  const auto kx_opt = fam.domain()->grid_steps();
  const auto kp_opt = fam.params().space()->grid_steps();
  if (!kx_opt || !kp_opt) throw DomainError("no_continuous_selection_demo: family must live on uniform grids");
  const std::size_t kx = *kx_opt;
  const std::size_t kp = *kp_opt;
  auto left = [kx](std::size_t i) { return 3 * i <= kx; };
  auto right = [kx](std::size_t i) { return 3 * i >= 2 * kx; };

  SelectionGapReport rep;
  rep.eps = eps;
  rep.middle_empty = true;
  std::size_t lo_idx = 0;
  std::size_t hi_idx = kx;
  for (std::size_t j = 0; j <= kp; ++j) {
    const PointSubset omega = argmin_set(fam.member(j), eps);
    SelectionGapRow row;
    row.p = j;
    for (std::size_t i : omega.members()) {
      if (left(i)) row.left_max = row.left_max ? std::max(*row.left_max, i) : i;
      else if (right(i)) row.right_min = row.right_min ? std::min(*row.right_min, i) : i;
      else ++row.middle_count;
    }
    if (j == 0) rep.f0_in_left = std::all_of(omega.members().begin(), omega.members().end(), left);
    if (j == kp) rep.f1_in_right = std::all_of(omega.members().begin(), omega.members().end(), right);
    rep.middle_empty = rep.middle_empty && row.middle_count == 0;
    if (row.left_max) lo_idx = std::max(lo_idx, *row.left_max);
    if (row.right_min) hi_idx = std::min(hi_idx, *row.right_min);
    rep.rows.push_back(row);
  }
  rep.gap_lo = static_cast<double>(lo_idx) / static_cast<double>(kx);
  rep.gap_hi = static_cast<double>(hi_idx) / static_cast<double>(kx);
  return rep;
}

struct SumEpiReport {
  bool joint_continuous = false;       // |g_q(y) - g_p(x)| < ε on B_δ(p) × X × B_δ(x)
  std::optional<double> joint_delta;
  double joint_worst = 0.0;
  std::vector<EpiCertificate> cond1;   // one per x with finite (f+g)_p(x)
  std::optional<double> cond1_delta;   // min over x (uniform in x)
  EpiCertificate cond2;
  bool holds = false;
};

/// Joint-continuity precheck for g, then conditions (1) and (2) on f + g at p.
inline SumEpiReport check_sum_epi(const ParametricFamily& fam, const PerturbationFamily& g_fam, std::size_t p, double eps,
                                  const std::vector<double>& delta_grid = {}) {
  if (!(eps > 0.0)) throw DomainError("check_sum_epi: eps must be positive");
  SumEpiReport rep;
  const auto& X = *fam.domain();
  const auto& gp = g_fam.member(p);
  for (double delta : effective_delta_grid(delta_grid, eps, fam.params().min_gap())) {
    std::vector<std::vector<std::size_t>> near(X.size());
    for (std::size_t x = 0; x < X.size(); ++x)
      for (std::size_t y = 0; y < X.size(); ++y)
        if (X.dist(x, y) <= delta) near[x].push_back(y);
    double worst = 0.0;
    for (std::size_t q : parameter_ball(g_fam.params(), p, delta)) {
      const auto& gq = g_fam.member(q);
      for (std::size_t x = 0; x < X.size(); ++x)
        for (std::size_t y : near[x]) worst = std::max(worst, std::abs(gq[y] - gp[x]));
    }
    rep.joint_worst = worst;
    if (worst < eps) {
      rep.joint_delta = delta;
      rep.joint_continuous = true;
      break;
    }
  }
  if (!rep.joint_continuous) return rep;

  const ParametricFamily summed = add_perturbation(fam, g_fam);
  bool cond1_ok = true;
  for (std::size_t x = 0; x < X.size(); ++x) {
    if (summed.member(p)[x].is_infinite()) continue;
    EpiCertificate c = check_cond1(summed, p, x, eps, delta_grid);
    cond1_ok = cond1_ok && c.found();
    if (c.found()) rep.cond1_delta = rep.cond1_delta ? std::min(*rep.cond1_delta, *c.delta) : *c.delta;
    rep.cond1.push_back(std::move(c));
  }
  rep.cond2 = check_cond2(summed, p, eps, delta_grid);
  rep.holds = cond1_ok && rep.cond2.found();
  return rep;
}

}  // namespace wellpose
