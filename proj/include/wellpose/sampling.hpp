#pragma once

// Seeded random instances for property checks.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "wellpose/extended_real.hpp"
#include "wellpose/objectives.hpp"
#include "wellpose/perturbation_function.hpp"
#include "wellpose/seminorm.hpp"
#include "wellpose/spaces.hpp"

namespace wellpose::sampling {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t index(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

/// n points in [0,1]^dim under a random coordinate metric.
inline SpaceRef point_cloud(Rng& rng, std::size_t n, std::size_t dim) {
  static constexpr Metric metrics[] = {Metric::euclidean, Metric::linf, Metric::l1};
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (double& c : p) c = uniform(rng, 0.0, 1.0);
  return share(FiniteMetricSpace::point_cloud(pts, metrics[index(rng, 3)]));
}

/// Random proper objective; each point is +inf with probability p_inf,
/// except one forced finite point.
inline ObjectiveFunction objective(Rng& rng, const SpaceRef& space, double p_inf = 0.1) {
  std::vector<ExtendedReal> v(space->size());
  std::bernoulli_distribution is_inf(p_inf);
  for (auto& x : v) x = is_inf(rng) ? ExtendedReal::infinity() : ExtendedReal(uniform(rng, -1.0, 1.0));
  v[index(rng, v.size())] = ExtendedReal(uniform(rng, -1.0, 1.0));
  return {space, std::move(v)};
}

/// Values in [-bound, bound).
inline PerturbationFunction perturbation(Rng& rng, const SpaceRef& space, double bound) {
  std::vector<double> v(space->size());
  for (double& x : v) x = uniform(rng, -bound, bound);
  return {space, std::move(v)};
}

inline std::vector<double> vector(Rng& rng, std::size_t dim, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(dim);
  for (double& c : v) c = uniform(rng, lo, hi);
  return v;
}

/// A norm: positive multiple of the max-abs, l1 or euclidean norm plus a
/// random abs_linear term.
inline Seminorm norm(Rng& rng, std::size_t dim) {
  const std::size_t pick = index(rng, 3);
  Seminorm core = pick == 0 ? max_abs_norm(dim) : pick == 1 ? l1_norm(dim) : Seminorm::euclidean(dim);
  return Seminorm::scale(uniform(rng, 0.5, 2.0), core) + Seminorm::abs_linear(vector(rng, dim));
}

/// Random tree of the given depth; leaves are abs_linear or euclidean.
inline Seminorm seminorm(Rng& rng, std::size_t dim, int depth) {
  if (depth <= 0) {
    if (index(rng, 4) == 0) return Seminorm::scale(uniform(rng, 0.1, 2.0), Seminorm::euclidean(dim));
    return Seminorm::abs_linear(vector(rng, dim));
  }
  switch (index(rng, 5)) {
    case 0: return Seminorm::max_of({seminorm(rng, dim, depth - 1), seminorm(rng, dim, depth - 1), seminorm(rng, dim, depth - 1)});
    case 1: return Seminorm::sum({seminorm(rng, dim, depth - 1), seminorm(rng, dim, depth - 1)});
    case 2: return Seminorm::scale(uniform(rng, 0.0, 3.0), seminorm(rng, dim, depth - 1));
    case 3: return Seminorm::line_quotient(norm(rng, dim), vector(rng, dim));
    default: return seminorm(rng, dim, 0);
  }
}

/// Random expression whose root has the given kind.
inline Seminorm seminorm_of_kind(Rng& rng, Seminorm::Kind kind, std::size_t dim) {
  switch (kind) {
    case Seminorm::Kind::abs_linear: return Seminorm::abs_linear(vector(rng, dim));
    case Seminorm::Kind::euclidean: return Seminorm::euclidean(dim);
    case Seminorm::Kind::max_of: return Seminorm::max_of({seminorm(rng, dim, 1), seminorm(rng, dim, 1), seminorm(rng, dim, 0)});
    case Seminorm::Kind::sum: return Seminorm::sum({seminorm(rng, dim, 1), seminorm(rng, dim, 0)});
    case Seminorm::Kind::scale: return Seminorm::scale(uniform(rng, 0.0, 3.0), seminorm(rng, dim, 1));
    case Seminorm::Kind::line_quotient: return Seminorm::line_quotient(norm(rng, dim), vector(rng, dim));
  }
  return Seminorm::euclidean(dim);
}

}  // namespace wellpose::sampling
