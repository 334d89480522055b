#pragma once

// Bounded perturbations: cone bumps, the density step of the variational
// principle, membership in the dense-open sets M_n, the openness radius, and
// checks of the perturbation-space axioms.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wellpose/error.hpp"
#include "wellpose/family.hpp"
#include "wellpose/objectives.hpp"
#include "wellpose/perturbation_function.hpp"
#include "wellpose/spaces.hpp"

namespace wellpose {

/// p ↦ g_p, one bounded function per parameter.
class PerturbationFamily {
 public:
  PerturbationFamily(ParameterGrid params, SpaceRef domain, std::vector<PerturbationFunction> table, std::string descriptor = {})
      : params_(std::move(params)), domain_(std::move(domain)), table_(std::move(table)), descriptor_(std::move(descriptor)) {
    if (table_.size() != params_.size()) throw DomainError("PerturbationFamily: one member per parameter required");
    for (const auto& g : table_)
      if (g.space() != domain_) throw DomainError("PerturbationFamily: member over a different domain");
  }

  /// g_p = g for every p.
  static PerturbationFamily constant(ParameterGrid params, const PerturbationFunction& g, std::string descriptor = {}) {
    std::vector<PerturbationFunction> t(params.size(), g);
    SpaceRef dom = g.space();
    return {std::move(params), std::move(dom), std::move(t), std::move(descriptor)};
  }

  [[nodiscard]] const ParameterGrid& params() const { return params_; }
  [[nodiscard]] const SpaceRef& domain() const { return domain_; }
  [[nodiscard]] const PerturbationFunction& member(std::size_t p) const { return table_.at(p); }
  [[nodiscard]] std::size_t param_count() const { return table_.size(); }
  [[nodiscard]] const std::string& descriptor() const { return descriptor_; }

  friend PerturbationFamily operator+(const PerturbationFamily& a, const PerturbationFamily& b) {
    if (a.domain_ != b.domain_ || a.param_count() != b.param_count()) throw DomainError("PerturbationFamily: shape mismatch");
    std::vector<PerturbationFunction> t;
    t.reserve(a.param_count());
    for (std::size_t p = 0; p < a.param_count(); ++p) t.push_back(a.table_[p] + b.table_[p]);
    return {a.params_, a.domain_, std::move(t), a.descriptor_ + "+" + b.descriptor_};
  }

 private:
  ParameterGrid params_;
  SpaceRef domain_;
  std::vector<PerturbationFunction> table_;
  std::string descriptor_;
};

/// Generic BUC metric: sup over p of ‖g_p - h_p‖∞.
inline double sup_family_distance(const PerturbationFamily& g, const PerturbationFamily& h) {
  if (g.param_count() != h.param_count()) throw DomainError("sup_family_distance: parameter count mismatch");
  double best = 0.0;
  for (std::size_t p = 0; p < g.param_count(); ++p) best = std::max(best, sup_distance(g.member(p), h.member(p)));
  return best;
}

/// The (f_p + g_p) family.
inline ParametricFamily add_perturbation(const ParametricFamily& fam, const PerturbationFamily& g) {
  if (fam.domain() != g.domain() || fam.param_count() != g.param_count())
    throw DomainError("add_perturbation: families over different spaces");
  std::vector<ObjectiveFunction> t;
  t.reserve(fam.param_count());
  for (std::size_t p = 0; p < fam.param_count(); ++p) t.push_back(fam.member(p) + g.member(p));
  return {fam.params(), fam.domain(), std::move(t)};
}

/// u(x) = (β/γ) d(x,a) inside the closed γ-ball around a, β outside.
inline PerturbationFunction cone_perturbation(const SpaceRef& space, std::size_t a, double beta, double gamma) {
  if (!(beta > 0.0) || !(gamma > 0.0)) throw DomainError("cone_perturbation: beta and gamma must be positive");
  if (a >= space->size()) throw DomainError("cone_perturbation: anchor out of range");
  std::vector<double> v(space->size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    const double d = space->dist(x, a);
    v[x] = d <= gamma ? std::min(beta, beta * d / gamma) : beta;
  }
  return {space, std::move(v)};
}

struct DensityStepResult {
  PerturbationFunction g_prime;
  PerturbationFunction increment;  // g' - g, the cone bump
  std::size_t anchor = 0;
  double delta = 0.0;
  double achieved_diam = 0.0;
  double distance_moved = 0.0;
};

/// One density step: anchor a = lowest index of Ω_{f+g}(ε/4), add the cone
/// u_{a,ε,ε/2}. Afterwards Ω_{f+g'}(ε/2) ⊆ B_{ε/2}(a), hence diam <= ε.
inline DensityStepResult buc_density_step(const ObjectiveFunction& f, const PerturbationFunction& g, double eps) {
  if (!(eps > 0.0)) throw DomainError("buc_density_step: eps must be positive");
  const std::size_t a = argmin_set(f + g, eps / 4.0).members().front();
  PerturbationFunction u = cone_perturbation(f.space(), a, eps, eps / 2.0);
  PerturbationFunction g_prime = g + u;
  const double achieved = diam(argmin_set(f + g_prime, eps / 2.0));
  const double moved = u.sup_norm();
  return {std::move(g_prime), std::move(u), a, eps / 2.0, achieved, moved};
}

struct MnReport {
  bool member = false;
  std::optional<double> witness_t;  // largest grid t with diam Ω(t) < 1/n
};

/// Default t grid: geometric from the space diameter down 16 octaves.
inline std::vector<double> default_t_grid(const FiniteMetricSpace& space) {
  const double top = space.diameter();
  return geometric_grid(top > 0.0 ? top : 1.0, 16);
}

/// Grid-relative membership of g in M_n = {g : ∃t>0, diam Ω_{f+g}(t) < 1/n}.
inline MnReport mn_membership(const ObjectiveFunction& f, const PerturbationFunction& g, std::size_t n,
                              std::vector<double> t_grid = {}) {
  if (n == 0) throw DomainError("mn_membership: n must be >= 1");
  if (t_grid.empty()) t_grid = default_t_grid(*f.space());
  std::sort(t_grid.begin(), t_grid.end(), std::greater<>());
  const ObjectiveFunction h = f + g;
  const double bound = 1.0 / static_cast<double>(n);
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("mn_membership: t grid must be positive");
    if (diam(argmin_set(h, t)) < bound) return {true, t};
  }
  return {false, std::nullopt};
}

/// ε / (3 c(p)): every g'' with ρ(g, g'') below this keeps
/// diam Ω_{f+g''}(ε/3) <= diam Ω_{f+g}(ε).
inline double openness_radius(const ObjectiveFunction& f, const PerturbationFunction& g, double eps, double c_p) {
  if (!(c_p > 0.0)) throw DomainError("openness_radius: c(p) must be positive");
  if (!(eps > 0.0)) throw DomainError("openness_radius: eps must be positive");
  (void)diam(argmin_set(f + g, eps));
  return eps / (3.0 * c_p);
}

struct OpennessCheck {
  bool applicable = false;  // distance < radius
  bool holds = false;       // inclusion and diam inequality
  double distance = 0.0;
  double radius = 0.0;
  double diam_before = 0.0;  // diam Ω_{f+g}(ε)
  double diam_after = 0.0;   // diam Ω_{f+g''}(ε/3)
};

/// Replays the openness contract for one perturbed g''. `distance` is ρ(g, g'')
/// in the caller's metric. Outside the radius the result is reported as not
/// applicable; it is never an error.
inline OpennessCheck check_openness_contract(const ObjectiveFunction& f, const PerturbationFunction& g,
                                             const PerturbationFunction& g2, double eps, double c_p, double distance) {
  OpennessCheck out;
  out.radius = openness_radius(f, g, eps, c_p);
  out.distance = distance;
  out.applicable = distance < out.radius;
  const PointSubset before = argmin_set(f + g, eps);
  const PointSubset after = argmin_set(f + g2, eps / 3.0);
  out.diam_before = diam(before);
  out.diam_after = diam(after);
  out.holds = after.is_subset_of(before) && out.diam_after <= out.diam_before;
  return out;
}

// ---------------------------------------------------------------------------
// Perturbation-space axioms

/// A ρ-distance with a certified error bound (0 for exactly computable metrics).
struct Distance {
  double value = 0.0;
  double error_bound = 0.0;
  [[nodiscard]] double upper() const { return value + error_bound; }
};

template <class E>
struct Improvement {
  E g_prime;
  double delta = 0.0;
};

/// A concrete perturbation space (𝒢, ρ): elements, their value tables over
/// P×X, the metric, the cone addition, the axiom-(iii) constant when known, and
/// the concrete density construction used for axiom (iv).
template <class S>
concept PerturbationSpaceModel = requires(const S& s, const typename S::element_type& g, std::size_t p, double eps,
                                          const ObjectiveFunction& f) {
  { s.table(g) } -> std::convertible_to<PerturbationFamily>;
  { s.rho(g, g) } -> std::convertible_to<Distance>;
  { s.add(g, g) } -> std::convertible_to<typename S::element_type>;
  { s.declared_constant(p) } -> std::convertible_to<std::optional<double>>;
  { s.improve(f, g, p, eps) } -> std::convertible_to<Improvement<typename S::element_type>>;
};

/// BUC(X) with ρ = sup over p of the sup-norm distance; c(p) = 1.
struct BucSpace {
  using element_type = PerturbationFamily;

  [[nodiscard]] PerturbationFamily table(const PerturbationFamily& g) const { return g; }
  [[nodiscard]] Distance rho(const PerturbationFamily& a, const PerturbationFamily& b) const {
    return {sup_family_distance(a, b), 0.0};
  }
  [[nodiscard]] PerturbationFamily add(const PerturbationFamily& a, const PerturbationFamily& b) const { return a + b; }
  [[nodiscard]] std::optional<double> declared_constant(std::size_t) const { return 1.0; }
  [[nodiscard]] Improvement<PerturbationFamily> improve(const ObjectiveFunction& f_p, const PerturbationFamily& g,
                                                        std::size_t p, double eps) const {
    const DensityStepResult step = buc_density_step(f_p, g.member(p), eps);
    PerturbationFamily bump = PerturbationFamily::constant(g.params(), step.increment, "cone");
    return {g + bump, step.delta};
  }
};

struct ContinuityWitness {
  std::size_t sample = 0;
  std::size_t p = 0;
  double eps = 0.0;
  std::optional<double> delta;
  double worst = 0.0;  // max ‖g_q - g_p‖∞ over the certified ball (or the largest ball tried)
};

struct ConstantEntry {
  std::size_t p = 0;
  double required = 0.0;  // smallest c(p) consistent with the samples
  std::optional<double> declared;
};

struct DensityWitness {
  std::size_t sample = 0;
  std::size_t p = 0;
  double eps = 0.0;
  Distance moved;
  double delta = 0.0;
  double achieved_diam = 0.0;
  bool pass = false;
};

struct PertAxiomReport {
  bool metric_pass = true;
  std::string metric_witness;
  bool bounded_pass = true;  // (i)
  double max_abs_value = 0.0;
  bool continuity_pass = true;  // (ii)
  double lipschitz_modulus = 0.0;
  std::vector<ContinuityWitness> continuity;
  bool domination_pass = true;  // (iii)
  std::vector<ConstantEntry> constants;
  bool density_pass = true;  // (iv)
  std::vector<DensityWitness> density;

  [[nodiscard]] bool all_pass() const {
    return metric_pass && bounded_pass && continuity_pass && domination_pass && density_pass;
  }
};

/// Checks the metric precheck and axioms (i)-(iv) on sampled elements and
/// sampled parameters. Axiom (iv) is exercised at ε/2 so that the strict
/// inequalities ρ(g,g') < ε and diam < ε hold for constructions that achieve
/// the non-strict versions.
template <PerturbationSpaceModel S>
PertAxiomReport check_pert_axioms(const S& space, const std::vector<typename S::element_type>& samples,
                                  const ParametricFamily& f_fam, const std::vector<std::size_t>& sample_p,
                                  const std::vector<double>& eps_list) {
  if (samples.empty() || sample_p.empty() || eps_list.empty()) throw DomainError("check_pert_axioms: empty samples");
  PertAxiomReport rep;
  const ParameterGrid& params = f_fam.params();

  // translation invariance and ρ(g,g) = 0 on sampled triples
  for (std::size_t i = 0; i < samples.size() && rep.metric_pass; ++i) {
    const Distance self = space.rho(samples[i], samples[i]);
    if (self.value != 0.0) {
      rep.metric_pass = false;
      rep.metric_witness = "rho(g,g) != 0 for sample " + std::to_string(i);
    }
    for (std::size_t j = 0; j < samples.size() && rep.metric_pass; ++j)
      for (std::size_t k = 0; k < samples.size() && rep.metric_pass; ++k) {
        const Distance base = space.rho(samples[i], samples[j]);
        const Distance shifted = space.rho(space.add(samples[i], samples[k]), space.add(samples[j], samples[k]));
        const double tol = 1e-9 * (1.0 + base.value) + base.error_bound + shifted.error_bound;
        if (std::abs(base.value - shifted.value) > tol) {
          rep.metric_pass = false;
          rep.metric_witness = "translation invariance fails for samples (" + std::to_string(i) + "," +
                               std::to_string(j) + ") shifted by " + std::to_string(k);
        }
      }
  }

  std::vector<PerturbationFamily> tables;
  tables.reserve(samples.size());
  for (const auto& g : samples) tables.push_back(space.table(g));

  // (i) boundedness is structural (PerturbationFunction rejects non-finite values)
  for (const auto& t : tables)
    for (std::size_t p = 0; p < t.param_count(); ++p) rep.max_abs_value = std::max(rep.max_abs_value, t.member(p).sup_norm());
  rep.bounded_pass = std::isfinite(rep.max_abs_value);

  // (ii) continuity of p ↦ g_p in sup-norm
  for (std::size_t s = 0; s < tables.size(); ++s) {
    const auto& t = tables[s];
    for (std::size_t p : sample_p) {
      for (std::size_t q = 0; q < params.size(); ++q) {
        const double mu = params.dist(p, q);
        if (mu > 0.0) rep.lipschitz_modulus = std::max(rep.lipschitz_modulus, sup_distance(t.member(p), t.member(q)) / mu);
      }
      for (double eps : eps_list) {
        ContinuityWitness w{s, p, eps, std::nullopt, 0.0};
        for (double delta : effective_delta_grid({}, eps, params.min_gap())) {
          double worst = 0.0;
          for (std::size_t q : parameter_ball(params, p, delta)) worst = std::max(worst, sup_distance(t.member(p), t.member(q)));
          w.worst = worst;
          if (worst < eps) {
            w.delta = delta;
            break;
          }
        }
        rep.continuity_pass = rep.continuity_pass && w.delta.has_value();
        rep.continuity.push_back(w);
      }
    }
  }

  // (iii) ‖g_p‖∞ <= c(p) ρ(g, 0)
  for (std::size_t p : sample_p) {
    ConstantEntry e{p, 0.0, space.declared_constant(p)};
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const double gp = tables[s].member(p).sup_norm();
      if (gp == 0.0) continue;
      const Distance to_zero = space.rho(samples[s], space.add(samples[s], samples[s]));
      // ρ(g, 2g) = ρ(0, g) by translation invariance; avoids requiring a zero element
      const double upper = to_zero.upper();
      e.required = upper > 0.0 ? std::max(e.required, gp / upper) : std::numeric_limits<double>::infinity();
    }
    if (e.declared) rep.domination_pass = rep.domination_pass && *e.declared >= e.required * (1.0 - 1e-12);
    else rep.domination_pass = rep.domination_pass && std::isfinite(e.required);
    rep.constants.push_back(e);
  }

  // (iv) concrete density step
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t p : sample_p) {
      for (double eps : eps_list) {
        auto imp = space.improve(f_fam.member(p), samples[s], p, eps / 2.0);
        DensityWitness w;
        w.sample = s;
        w.p = p;
        w.eps = eps;
        w.moved = space.rho(samples[s], imp.g_prime);
        w.delta = imp.delta;
        const PerturbationFamily t = space.table(imp.g_prime);
        w.achieved_diam = diam(argmin_set(f_fam.member(p) + t.member(p), imp.delta));
        w.pass = w.moved.upper() < eps && w.achieved_diam < eps && imp.delta > 0.0;
        rep.density_pass = rep.density_pass && w.pass;
        rep.density.push_back(w);
      }
    }
  }
  return rep;
}

}  // namespace wellpose
