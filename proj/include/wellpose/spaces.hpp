#pragma once

// Finite metric spaces: points are indices 0..n-1, geometry is baked into a
// distance oracle at construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wellpose/error.hpp"

namespace wellpose {

enum class Metric { euclidean, linf, l1, matrix };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::linf: return "linf";
    case Metric::l1: return "l1";
    case Metric::matrix: return "matrix";
  }
  return "?";
}

inline double coordinate_distance(std::span<const double> a, std::span<const double> b, Metric m) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    switch (m) {
      case Metric::euclidean: acc += d * d; break;
      case Metric::linf: acc = std::max(acc, d); break;
      case Metric::l1: acc += d; break;
      case Metric::matrix: throw DomainError("coordinate_distance: matrix metric has no coordinates");
    }
  }
  return m == Metric::euclidean ? std::sqrt(acc) : acc;
}

class FiniteMetricSpace {
 public:
  /// Matrices are materialized for spaces up to this many points.
  static constexpr std::size_t kEagerLimit = 4096;

  /// steps+1 equally spaced points on [lo, hi]; distances are |i-j|*(hi-lo)/steps,
  /// so for [0,1] every distance is the correctly rounded value of the rational |i-j|/steps.
  static FiniteMetricSpace grid1d(double lo, double hi, std::size_t steps) {
    if (steps == 0 || !(hi > lo)) throw DomainError("grid1d: need steps >= 1 and hi > lo");
    FiniteMetricSpace s;
    s.n_ = steps + 1;
    s.dim_ = 1;
    s.metric_ = Metric::euclidean;
    s.grid_lo_ = lo;
    s.grid_span_ = hi - lo;
    s.grid_steps_ = steps;
    s.coords_.resize(s.n_);
    for (std::size_t i = 0; i < s.n_; ++i) s.coords_[i] = lo + (static_cast<double>(i) * s.grid_span_) / static_cast<double>(steps);
    return s;
  }

  static FiniteMetricSpace grid2d(std::array<double, 2> lo, std::array<double, 2> hi, std::array<std::size_t, 2> steps,
                                  Metric metric) {
    if (metric == Metric::matrix) throw DomainError("grid2d: matrix metric needs explicit distances");
    std::vector<std::vector<double>> pts;
    for (std::size_t j = 0; j <= steps[1]; ++j) {
      for (std::size_t i = 0; i <= steps[0]; ++i) {
        const double x = steps[0] == 0 ? lo[0] : lo[0] + (static_cast<double>(i) * (hi[0] - lo[0])) / static_cast<double>(steps[0]);
        const double y = steps[1] == 0 ? lo[1] : lo[1] + (static_cast<double>(j) * (hi[1] - lo[1])) / static_cast<double>(steps[1]);
        pts.push_back({x, y});
      }
    }
    return point_cloud(pts, metric);
  }

  static FiniteMetricSpace point_cloud(const std::vector<std::vector<double>>& points, Metric metric) {
    if (points.empty()) throw DomainError("point_cloud: no points");
    if (metric == Metric::matrix) throw DomainError("point_cloud: matrix metric needs explicit distances");
    FiniteMetricSpace s;
    s.n_ = points.size();
    s.dim_ = points.front().size();
    s.metric_ = metric;
    for (const auto& p : points) {
      if (p.size() != s.dim_) throw InstanceError("point_cloud: ragged coordinates");
      s.coords_.insert(s.coords_.end(), p.begin(), p.end());
    }
    s.materialize();
    return s;
  }

  /// Row-major n×n matrix. Zero diagonal and symmetry are checked here; the
  /// triangle inequality is left to validate_metric().
  static FiniteMetricSpace from_matrix(std::size_t n, std::vector<double> row_major) {
    if (n == 0 || row_major.size() != n * n) throw InstanceError("from_matrix: need n*n entries");
    for (std::size_t i = 0; i < n; ++i) {
      if (row_major[i * n + i] != 0.0) throw InstanceError("from_matrix: nonzero diagonal");
      for (std::size_t j = 0; j < n; ++j) {
        const double d = row_major[i * n + j];
        if (!std::isfinite(d) || d < 0.0) throw InstanceError("from_matrix: negative or non-finite distance");
        if (d != row_major[j * n + i]) throw InstanceError("from_matrix: asymmetric distances");
      }
    }
    FiniteMetricSpace s;
    s.n_ = n;
    s.metric_ = Metric::matrix;
    s.matrix_ = std::move(row_major);
    return s;
  }

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t dimension() const { return dim_; }
  [[nodiscard]] Metric metric() const { return metric_; }
  [[nodiscard]] std::optional<std::size_t> grid_steps() const {
    if (grid_steps_ == 0) return std::nullopt;
    return grid_steps_;
  }

  /// Coordinates of point i; empty for matrix spaces.
  [[nodiscard]] std::span<const double> coordinates(std::size_t i) const {
    if (dim_ == 0) return {};
    return {coords_.data() + i * dim_, dim_};
  }

  [[nodiscard]] double dist(std::size_t i, std::size_t j) const {
    if (grid_steps_ != 0) {
      const std::size_t k = i > j ? i - j : j - i;
      return (static_cast<double>(k) * grid_span_) / static_cast<double>(grid_steps_);
    }
    if (!matrix_.empty()) return matrix_[i * n_ + j];
    return coordinate_distance(coordinates(i), coordinates(j), metric_);
  }

  /// Smallest positive pairwise distance (0 for a one-point space).
  [[nodiscard]] double min_positive_distance() const {
    if (grid_steps_ != 0) return dist(0, 1);
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = dist(i, j);
        if (d > 0.0 && (best == 0.0 || d < best)) best = d;
      }
    }
    return best;
  }

  [[nodiscard]] double diameter() const {
    if (grid_steps_ != 0) return grid_span_;
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) best = std::max(best, dist(i, j));
    return best;
  }

 private:
  void materialize() {
    if (n_ > kEagerLimit) return;
    matrix_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = coordinate_distance(coordinates(i), coordinates(j), metric_);
        matrix_[i * n_ + j] = d;
        matrix_[j * n_ + i] = d;
      }
  }

  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  Metric metric_ = Metric::euclidean;
  std::vector<double> coords_;
  std::vector<double> matrix_;
  double grid_lo_ = 0.0;
  double grid_span_ = 0.0;
  std::size_t grid_steps_ = 0;
};

using SpaceRef = std::shared_ptr<const FiniteMetricSpace>;

inline SpaceRef share(FiniteMetricSpace s) { return std::make_shared<const FiniteMetricSpace>(std::move(s)); }

struct MetricCheck {
  bool ok = true;
  std::string violation;
};

/// Metric axioms: exhaustive over all triples for n <= 200, otherwise on
/// `random_triples` seeded triples.
inline MetricCheck validate_metric(const FiniteMetricSpace& s, std::uint64_t seed = 0, std::size_t random_triples = 200000) {
  const std::size_t n = s.size();
  auto fail = [](std::string msg) { return MetricCheck{false, std::move(msg)}; };
  for (std::size_t i = 0; i < n; ++i) {
    if (s.dist(i, i) != 0.0) return fail("dist(i,i) != 0 at i=" + std::to_string(i));
  }
  auto triangle = [&](std::size_t i, std::size_t j, std::size_t k) {
    const double lhs = s.dist(i, k);
    const double rhs = s.dist(i, j) + s.dist(j, k);
    // rounding slack only: 4 ulp of the right-hand side
    return lhs <= rhs + 4.0 * std::numeric_limits<double>::epsilon() * rhs;
  };
  if (n <= 200) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (s.dist(i, j) != s.dist(j, i) || s.dist(i, j) < 0.0)
          return fail("asymmetric or negative at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        for (std::size_t k = 0; k < n; ++k)
          if (!triangle(i, j, k))
            return fail("triangle inequality at (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
      }
    return {};
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < random_triples; ++t) {
    const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    if (s.dist(i, j) != s.dist(j, i) || s.dist(i, j) < 0.0) return fail("asymmetric or negative");
    if (!triangle(i, j, k)) return fail("triangle inequality");
  }
  return {};
}

/// Index subset of a space. Members are kept sorted and distinct.
class PointSubset {
 public:
  PointSubset(SpaceRef space, std::vector<std::size_t> members) : space_(std::move(space)), members_(std::move(members)) {
    if (!space_) throw DomainError("PointSubset: null space");
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw DomainError("PointSubset: duplicate index");
    if (!members_.empty() && members_.back() >= space_->size()) throw DomainError("PointSubset: index out of range");
  }

  [[nodiscard]] const SpaceRef& space() const { return space_; }
  [[nodiscard]] const std::vector<std::size_t>& members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] bool contains(std::size_t i) const { return std::binary_search(members_.begin(), members_.end(), i); }

  [[nodiscard]] bool is_subset_of(const PointSubset& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  friend bool operator==(const PointSubset& a, const PointSubset& b) {
    return a.space_ == b.space_ && a.members_ == b.members_;
  }

 private:
  SpaceRef space_;
  std::vector<std::size_t> members_;
};

/// Largest pairwise distance among `idx` under `dist`. 0 for singletons.
template <class Dist>
double diameter_of(std::span<const std::size_t> idx, Dist&& dist) {
  double best = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) best = std::max(best, static_cast<double>(dist(idx[a], idx[b])));
  return best;
}

/// Closed ball {j : d(center, j) <= eps}, no tolerance.
inline PointSubset ball(const SpaceRef& space, std::size_t center, double eps) {
  if (!(eps >= 0.0)) throw DomainError("ball: negative radius");
  if (center >= space->size()) throw DomainError("ball: center out of range");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < space->size(); ++j)
    if (space->dist(center, j) <= eps) out.push_back(j);
  return PointSubset(space, std::move(out));
}

inline double diam(const PointSubset& subset) {
  if (subset.empty()) throw DomainError("diam: empty subset");
  const auto& s = *subset.space();
  return diameter_of(subset.members(), [&s](std::size_t i, std::size_t j) { return s.dist(i, j); });
}

inline double set_distance(const PointSubset& a, const PointSubset& b) {
  if (a.empty() || b.empty()) throw DomainError("set_distance: empty subset");
  if (a.space() != b.space()) throw DomainError("set_distance: subsets of different spaces");
  const auto& s = *a.space();
  double best = std::numeric_limits<double>::max();
  for (std::size_t i : a.members())
    for (std::size_t j : b.members()) best = std::min(best, s.dist(i, j));
  return best;
}

}  // namespace wellpose
