#pragma once

// Extended-real objectives on a finite space, their ε-argmin sets and the
// sublevel-set moduli that certify well-posedness.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "wellpose/error.hpp"
#include "wellpose/extended_real.hpp"
#include "wellpose/perturbation_function.hpp"
#include "wellpose/spaces.hpp"

namespace wellpose {

/// Proper extended-real function on a finite space. Bounded below is
/// automatic: the minimum over finitely many finite values exists.
class ObjectiveFunction {
 public:
  ObjectiveFunction(SpaceRef space, std::vector<ExtendedReal> values) : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw DomainError("ObjectiveFunction: null space");
    if (values_.size() != space_->size()) throw DomainError("ObjectiveFunction: size mismatch");
    bool proper = false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i].is_finite() && (!proper || values_[i] < values_[min_index_])) min_index_ = i;
      proper = proper || values_[i].is_finite();
    }
    if (!proper) throw DomainError("ObjectiveFunction: properness violated (every value is +inf)");
  }

  static ObjectiveFunction from_doubles(SpaceRef space, const std::vector<double>& values) {
    return {std::move(space), std::vector<ExtendedReal>(values.begin(), values.end())};
  }

  static ObjectiveFunction constant(SpaceRef space, double c) {
    const std::size_t n = space->size();
    return {std::move(space), std::vector<ExtendedReal>(n, ExtendedReal(c))};
  }

  [[nodiscard]] const SpaceRef& space() const { return space_; }
  [[nodiscard]] const std::vector<ExtendedReal>& values() const { return values_; }
  [[nodiscard]] const ExtendedReal& operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  /// Exact minimum over the finite values.
  [[nodiscard]] double min_value() const { return values_[min_index_].value(); }

  // +inf + finite = +inf, so the sum stays proper.
  friend ObjectiveFunction operator+(const ObjectiveFunction& f, const PerturbationFunction& g) {
    if (f.space_ != g.space()) throw DomainError("ObjectiveFunction + g: different spaces");
    std::vector<ExtendedReal> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values_[i] + ExtendedReal(g[i]);
    return {f.space_, std::move(v)};
  }

 private:
  SpaceRef space_;
  std::vector<ExtendedReal> values_;
  std::size_t min_index_ = 0;
};

inline double inf_value(const ObjectiveFunction& f) { return f.min_value(); }

/// Ω_f(ε) = {x : f(x) <= inf f + ε}, an exact filter with no tolerance.
inline PointSubset argmin_set(const ObjectiveFunction& f, double eps) {
  if (!(eps >= 0.0)) throw DomainError("argmin_set: negative eps");
  const ExtendedReal level(inf_value(f) + eps);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] <= level) out.push_back(i);
  return PointSubset(f.space(), std::move(out));
}

struct ModulusCurve {
  std::vector<double> eps_grid;
  std::vector<double> diam_values;
};

inline ModulusCurve wellposedness_modulus(const ObjectiveFunction& f, const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) throw DomainError("wellposedness_modulus: empty grid");
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    if (!(eps_grid[k] > 0.0)) throw DomainError("wellposedness_modulus: grid must be positive");
    if (k > 0 && !(eps_grid[k] > eps_grid[k - 1])) throw DomainError("wellposedness_modulus: grid must be strictly increasing");
  }
  ModulusCurve curve{eps_grid, {}};
  curve.diam_values.reserve(eps_grid.size());
  for (double e : eps_grid) curve.diam_values.push_back(diam(argmin_set(f, e)));
  return curve;
}

struct StrongMinCertificate {
  std::size_t minimizer = 0;
  ModulusCurve modulus;

  /// diam Ω(δ) as recorded on the grid, if δ is a grid value.
  [[nodiscard]] std::optional<double> diam_at(double delta) const {
    for (std::size_t k = 0; k < modulus.eps_grid.size(); ++k)
      if (modulus.eps_grid[k] == delta) return modulus.diam_values[k];
    return std::nullopt;
  }
};

/// Lowest-index exact minimizer together with the modulus curve on `eps_grid`.
inline StrongMinCertificate strong_min_certificate(const ObjectiveFunction& f, const std::vector<double>& eps_grid) {
  return {argmin_set(f, 0.0).members().front(), wellposedness_modulus(f, eps_grid)};
}

/// (f)_ε(x) = min{ f(y) : d(x,y) <= ε }.
inline ObjectiveFunction regularize(const ObjectiveFunction& f, double eps) {
  if (!(eps >= 0.0)) throw DomainError("regularize: negative eps");
  if (eps == 0.0) return f;
  const auto& s = *f.space();
  std::vector<ExtendedReal> out(f.size(), ExtendedReal::infinity());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (s.dist(i, j) <= eps && f[j] < out[i]) out[i] = f[j];
  return {f.space(), std::move(out)};
}

struct ContEpsReport {
  bool holds = false;
  PointSubset perturbed_set;  // Ω_{f+g}(ε/3)
  PointSubset reference_set;  // Ω_f(ε)
  std::vector<std::size_t> offenders;
};

/// Verifies Ω_{f+g}(ε/3) ⊆ Ω_f(ε) by enumeration. Refuses (PreconditionError)
/// unless ‖g‖∞ < ε/3 strictly: outside that hypothesis the inclusion can fail
/// legitimately.
inline ContEpsReport check_cont_eps_lemma(const ObjectiveFunction& f, const PerturbationFunction& g, double eps) {
  if (!(eps > 0.0)) throw DomainError("check_cont_eps_lemma: eps must be positive");
  if (!(g.sup_norm() < eps / 3.0)) throw PreconditionError("check_cont_eps_lemma: need sup|g| < eps/3");
  PointSubset inner = argmin_set(f + g, eps / 3.0);
  PointSubset outer = argmin_set(f, eps);
  std::vector<std::size_t> offenders;
  for (std::size_t i : inner.members())
    if (!outer.contains(i)) offenders.push_back(i);
  const bool holds = offenders.empty();
  return {holds, std::move(inner), std::move(outer), std::move(offenders)};
}

}  // namespace wellpose
