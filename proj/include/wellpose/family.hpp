#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "wellpose/error.hpp"
#include "wellpose/objectives.hpp"
#include "wellpose/spaces.hpp"

namespace wellpose {

/// Parameter space (P, μ) with an optional designated witness subset W.
class ParameterGrid {
 public:
  explicit ParameterGrid(SpaceRef space, std::vector<std::size_t> witnesses = {})
      : space_(std::move(space)), witnesses_(std::move(witnesses)) {
    if (!space_) throw DomainError("ParameterGrid: null space");
    for (std::size_t w : witnesses_)
      if (w >= space_->size()) throw DomainError("ParameterGrid: witness index out of range");
    min_gap_ = space_->min_positive_distance();
  }

  [[nodiscard]] const SpaceRef& space() const { return space_; }
  [[nodiscard]] std::size_t size() const { return space_->size(); }
  [[nodiscard]] const std::vector<std::size_t>& witnesses() const { return witnesses_; }
  [[nodiscard]] double dist(std::size_t p, std::size_t q) const { return space_->dist(p, q); }
  /// Smallest positive μ(p,q); δ-searches never go below it.
  [[nodiscard]] double min_gap() const { return min_gap_; }

 private:
  SpaceRef space_;
  std::vector<std::size_t> witnesses_;
  double min_gap_ = 0.0;
};

/// p ↦ f_p over a common domain X.
class ParametricFamily {
 public:
  ParametricFamily(ParameterGrid params, SpaceRef domain, std::vector<ObjectiveFunction> table,
                   std::optional<double> lipschitz_in_p = std::nullopt)
      : params_(std::move(params)), domain_(std::move(domain)), table_(std::move(table)), lipschitz_(lipschitz_in_p) {
    if (table_.size() != params_.size()) throw DomainError("ParametricFamily: one member per parameter required");
    for (const auto& f : table_)
      if (f.space() != domain_) throw DomainError("ParametricFamily: member over a different domain");
    if (lipschitz_ && !(*lipschitz_ > 0.0)) throw DomainError("ParametricFamily: Lipschitz constant must be positive");
  }

  [[nodiscard]] const ParameterGrid& params() const { return params_; }
  [[nodiscard]] const SpaceRef& domain() const { return domain_; }
  [[nodiscard]] const ObjectiveFunction& member(std::size_t p) const { return table_.at(p); }
  [[nodiscard]] const std::vector<ObjectiveFunction>& members() const { return table_; }
  [[nodiscard]] std::size_t param_count() const { return table_.size(); }
  /// L with |f_p(x) - f_q(x)| <= L μ(p,q) for all x, when known.
  [[nodiscard]] std::optional<double> lipschitz_in_p() const { return lipschitz_; }

 private:
  ParameterGrid params_;
  SpaceRef domain_;
  std::vector<ObjectiveFunction> table_;
  std::optional<double> lipschitz_;
};

/// {top, top/2, ..., top/2^octaves}
inline std::vector<double> geometric_grid(double top, int octaves) {
  if (!(top > 0.0)) throw DomainError("geometric_grid: top must be positive");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(octaves) + 1);
  for (int k = 0; k <= octaves; ++k) g.push_back(std::ldexp(top, -k));
  return g;
}

/// Validates a decreasing positive δ grid (empty means the default geometric
/// grid from eps down 16 octaves), clamps entries below `floor` up to it and
/// drops duplicates.
inline std::vector<double> effective_delta_grid(const std::vector<double>& grid, double eps, double floor) {
  std::vector<double> g = grid.empty() ? geometric_grid(eps, 16) : grid;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!(g[k] > 0.0)) throw DomainError("delta grid must be positive");
    if (k > 0 && g[k] > g[k - 1]) throw DomainError("delta grid must be decreasing");
  }
  for (double& d : g) d = std::max(d, floor);
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

/// Parameters q with μ(p,q) <= δ.
inline std::vector<std::size_t> parameter_ball(const ParameterGrid& params, std::size_t p, double delta) {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < params.size(); ++q)
    if (params.dist(p, q) <= delta) out.push_back(q);
  return out;
}

}  // namespace wellpose
