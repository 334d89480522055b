#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wellpose/error.hpp"
#include "wellpose/spaces.hpp"

namespace wellpose {

/// Bounded real function on a finite space (an element of BUC(X); on a finite
/// space every bounded function is uniformly continuous).
class PerturbationFunction {
 public:
  PerturbationFunction(SpaceRef space, std::vector<double> values) : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw DomainError("PerturbationFunction: null space");
    if (values_.size() != space_->size()) throw DomainError("PerturbationFunction: size mismatch");
    for (double v : values_) {
      if (!std::isfinite(v)) throw DomainError("PerturbationFunction: non-finite value");
      sup_norm_ = std::max(sup_norm_, std::abs(v));
    }
  }

  static PerturbationFunction zero(SpaceRef space) {
    const std::size_t n = space->size();
    return {std::move(space), std::vector<double>(n, 0.0)};
  }

  [[nodiscard]] const SpaceRef& space() const { return space_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double sup_norm() const { return sup_norm_; }

  friend PerturbationFunction operator+(const PerturbationFunction& a, const PerturbationFunction& b) {
    a.require_same_space(b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
    return {a.space_, std::move(v)};
  }
  friend PerturbationFunction operator-(const PerturbationFunction& a, const PerturbationFunction& b) {
    a.require_same_space(b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] - b.values_[i];
    return {a.space_, std::move(v)};
  }
  friend PerturbationFunction operator*(double c, const PerturbationFunction& a) {
    std::vector<double> v(a.values_);
    for (double& x : v) x *= c;
    return {a.space_, std::move(v)};
  }

 private:
  void require_same_space(const PerturbationFunction& other) const {
    if (space_ != other.space_) throw DomainError("PerturbationFunction: different spaces");
  }

  SpaceRef space_;
  std::vector<double> values_;
  double sup_norm_ = 0.0;
};

/// max_x |a(x) - b(x)|
inline double sup_distance(const PerturbationFunction& a, const PerturbationFunction& b) {
  if (a.space() != b.space()) throw DomainError("sup_distance: different spaces");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

}  // namespace wellpose
