#pragma once

// Instance builders shared by the unit tests and the acceptance binary.

#include <random>
#include <vector>

#include "wellpose/family.hpp"
#include "wellpose/perturbation.hpp"
#include "wellpose/steckin.hpp"

namespace fixtures {

using namespace wellpose;

/// f_p(x) = base(x) + p·slope(x) on random grids; |slope| <= L so the family
/// is L-Lipschitz in p.
inline ParametricFamily random_lipschitz_family(std::mt19937_64& rng, std::size_t nx, std::size_t np, double L) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpaceRef xs = share(FiniteMetricSpace::grid1d(0.0, 1.0, nx - 1));
  SpaceRef ps = share(FiniteMetricSpace::grid1d(0.0, 1.0, np - 1));
  std::vector<double> base(nx), slope(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    base[i] = u(rng);
    slope[i] = L * u(rng);
  }
  std::vector<ObjectiveFunction> t;
  for (std::size_t j = 0; j < np; ++j) {
    const double p = ps->coordinates(j)[0];
    std::vector<double> v(nx);
    for (std::size_t i = 0; i < nx; ++i) v[i] = base[i] + p * slope[i];
    t.push_back(ObjectiveFunction::from_doubles(xs, v));
  }
  return {ParameterGrid(ps), xs, std::move(t), L};
}

/// f_p ≡ 0 and f_q ≡ jump for every q != p.
inline ParametricFamily jump_family(std::size_t nx, std::size_t np, std::size_t p, double jump) {
  SpaceRef xs = share(FiniteMetricSpace::grid1d(0.0, 1.0, nx - 1));
  SpaceRef ps = share(FiniteMetricSpace::grid1d(0.0, 1.0, np - 1));
  std::vector<ObjectiveFunction> t;
  for (std::size_t j = 0; j < np; ++j) t.push_back(ObjectiveFunction::constant(xs, j == p ? 0.0 : jump));
  return {ParameterGrid(ps), xs, std::move(t)};
}

inline ParametricFamily constant_family(std::size_t nx, std::size_t np, const std::vector<double>& values) {
  SpaceRef xs = share(FiniteMetricSpace::grid1d(0.0, 1.0, nx - 1));
  SpaceRef ps = share(FiniteMetricSpace::grid1d(0.0, 1.0, np - 1));
  std::vector<ObjectiveFunction> t(np, ObjectiveFunction::from_doubles(xs, values));
  return {ParameterGrid(ps), xs, std::move(t)};
}

/// The segment {(x,0) : |x| <= 1} sampled at 2001 points.
inline ConvexBody unit_segment() { return ConvexBody::segment({-1.0, 0.0}, {1.0, 0.0}, 2001); }

inline const NormedSetting& max_abs_setting() {
  static const NormedSetting s = NormedSetting::make(max_abs_norm(2), 1e-3);
  return s;
}

}  // namespace fixtures
