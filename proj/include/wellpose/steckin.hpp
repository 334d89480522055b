#pragma once

// Renorming for well-posed metric projection onto a sampled convex body.
//
// Sups over the unit ball are taken over a sample of the base unit sphere with
// covering radius h (every sphere point lies within base-distance h of a
// sample). For a seminorm ν with k_ν = sup ν(S):
//   k_ν <= max_sample ν / (1 - h)      (chord argument, see NormedSetting)
//   a_ν >= min_sample ν - k_ν h        (ν is k_ν-Lipschitz w.r.t. the base)
//   |ρ - sampled ρ| <= (k_1 + k_2) h

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wellpose/error.hpp"
#include "wellpose/family.hpp"
#include "wellpose/objectives.hpp"
#include "wellpose/parallel.hpp"
#include "wellpose/perturbation.hpp"
#include "wellpose/seminorm.hpp"
#include "wellpose/spaces.hpp"

namespace wellpose {

/// Base norm on R^d (d = 2 or 3) plus a sample of its unit sphere.
///
/// d = 2: directions on a uniform angular grid, each scaled to base value 1.
/// For z on the arc between consecutive samples u, u' write z = w/base(w) with
/// w on the chord; base(w) >= 1 - h/2 and base(z - nearest) <= h where h is
/// the largest chord base(u' - u).
/// d = 3: vertices of a subdivided octahedron projected to the base sphere;
/// the same argument over a triangle gives covering radius <= 2·(longest edge).
class NormedSetting {
 public:
  static NormedSetting make(Seminorm base, double mesh_target) {
    if (!(mesh_target > 0.0) || !(mesh_target < 0.5)) throw DomainError("NormedSetting: mesh target must lie in (0, 0.5)");
    const std::size_t d = base.dim();
    if (d == 2) {
      for (std::size_t n = 1024; n <= (std::size_t{1} << 24); n *= 2) {
        NormedSetting s = circle(base, n);
        if (s.mesh_ <= mesh_target) return s;
      }
    } else if (d == 3) {
      for (std::size_t level = 4; level <= 4096; level *= 2) {
        NormedSetting s = octahedron(base, level);
        if (s.mesh_ <= mesh_target) return s;
      }
    } else {
      throw DomainError("NormedSetting: only d = 2 and d = 3 are supported");
    }
    throw DomainError("NormedSetting: mesh target not reachable");
  }

  [[nodiscard]] std::size_t dim() const { return base_.dim(); }
  [[nodiscard]] const Seminorm& base() const { return base_; }
  [[nodiscard]] double mesh() const { return mesh_; }
  [[nodiscard]] std::size_t sample_size() const { return points_.size() / dim(); }
  [[nodiscard]] std::span<const double> sample(std::size_t i) const { return {points_.data() + i * dim(), dim()}; }

  /// (min, max) of ν over the sphere sample.
  [[nodiscard]] std::pair<double, double> sweep(const Seminorm& nu) const {
    check_dim(nu);
    return sweep_with([&](std::span<const double> u) { return nu(u); });
  }

  template <class F>
  [[nodiscard]] std::pair<double, double> sweep_with(F&& f) const {
    auto parts = parallel_chunks<std::pair<double, double>>(sample_size(), [&](std::size_t lo, std::size_t hi) {
      std::pair<double, double> r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
      for (std::size_t i = lo; i < hi; ++i) {
        const double v = f(sample(i));
        r.first = std::min(r.first, v);
        r.second = std::max(r.second, v);
      }
      return r;
    });
    std::pair<double, double> out = parts.front();
    for (const auto& r : parts) {
      out.first = std::min(out.first, r.first);
      out.second = std::max(out.second, r.second);
    }
    return out;
  }

  void check_dim(const Seminorm& nu) const {
    if (nu.dim() != dim()) throw DomainError("seminorm dimension differs from the setting");
  }

 private:
  NormedSetting(Seminorm base) : base_(std::move(base)) {}

  void push_direction(std::span<const double> v) {
    const double b = base_(v);
    if (!(b > 0.0)) throw DomainError("NormedSetting: base vanishes on a sampled direction (not a norm)");
    for (double c : v) points_.push_back(c / b);
  }

  [[nodiscard]] double chord(std::size_t i, std::size_t j) const {
    std::vector<double> diff(dim());
    for (std::size_t k = 0; k < dim(); ++k) diff[k] = points_[i * dim() + k] - points_[j * dim() + k];
    return base_(diff);
  }

  static NormedSetting circle(const Seminorm& base, std::size_t n) {
    NormedSetting s(base);
    s.points_.reserve(2 * n);
    constexpr double two_pi = 6.283185307179586476925;
    for (std::size_t k = 0; k < n; ++k) {
      const double th = two_pi * static_cast<double>(k) / static_cast<double>(n);
      double v[2] = {std::cos(th), std::sin(th)};
      if ((4 * k) % n == 0) {
        // quarter turns land exactly on the axes
        constexpr double axis[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const std::size_t q = 4 * k / n;
        v[0] = axis[q][0];
        v[1] = axis[q][1];
      }
      s.push_direction(v);
    }
    double h = 0.0;
    for (std::size_t k = 0; k < n; ++k) h = std::max(h, s.chord(k, (k + 1) % n));
    s.mesh_ = h;
    return s;
  }

  static NormedSetting octahedron(const Seminorm& base, std::size_t level) {
    NormedSetting s(base);
    double edge = 0.0;
    const double L = static_cast<double>(level);
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) {
          // face with corners sx·e1, sy·e2, sz·e3; lattice (i, j, level-i-j)
          const std::size_t first = s.sample_size();
          auto index = [&](std::size_t i, std::size_t j) {
            // row i holds level-i+1 points
            std::size_t off = 0;
            for (std::size_t r = 0; r < i; ++r) off += level - r + 1;
            return first + off + j;
          };
          for (std::size_t i = 0; i <= level; ++i)
            for (std::size_t j = 0; i + j <= level; ++j) {
              const double k = L - static_cast<double>(i) - static_cast<double>(j);
              const double v[3] = {sx * static_cast<double>(i) / L, sy * static_cast<double>(j) / L, sz * k / L};
              s.push_direction(v);
            }
          for (std::size_t i = 0; i <= level; ++i)
            for (std::size_t j = 0; i + j <= level; ++j) {
              if (i + j + 1 <= level) {
                edge = std::max(edge, s.chord(index(i, j), index(i + 1, j)));
                edge = std::max(edge, s.chord(index(i, j), index(i, j + 1)));
                edge = std::max(edge, s.chord(index(i + 1, j), index(i, j + 1)));
              }
            }
        }
    s.mesh_ = 2.0 * edge;
    return s;
  }

  Seminorm base_;
  std::vector<double> points_;
  double mesh_ = 0.0;
};

/// Sampled sphere statistic with a certified two-sided bound.
struct SphereEstimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct RhoEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  [[nodiscard]] double upper() const { return value + error_bound; }
};

/// k_ν = sup ν(B_E) = sup ν(S_E).
inline SphereEstimate k_nu(const Seminorm& nu, const NormedSetting& s) {
  const double top = s.sweep(nu).second;
  return {top, top, top / (1.0 - s.mesh())};
}

/// a_ν = inf ν(S_E); ν is an equivalent norm iff a_ν > 0.
inline SphereEstimate a_nu(const Seminorm& nu, const NormedSetting& s) {
  const auto [lo, hi] = s.sweep(nu);
  const double k = hi / (1.0 - s.mesh());
  return {lo, lo - k * s.mesh(), lo};
}

inline bool certified_equivalent(const Seminorm& nu, const NormedSetting& s) { return a_nu(nu, s).lower > 0.0; }

/// ρ(ν1, ν2) = sup_{B_E} |ν1 - ν2|.
inline RhoEstimate rho(const Seminorm& nu1, const Seminorm& nu2, const NormedSetting& s) {
  s.check_dim(nu1);
  s.check_dim(nu2);
  double sup = 0.0, k1 = 0.0, k2 = 0.0;
  auto parts = parallel_chunks<std::array<double, 3>>(s.sample_size(), [&](std::size_t lo, std::size_t hi) {
    std::array<double, 3> r{0.0, 0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) {
      const double a = nu1(s.sample(i)), b = nu2(s.sample(i));
      r[0] = std::max(r[0], std::abs(a - b));
      r[1] = std::max(r[1], a);
      r[2] = std::max(r[2], b);
    }
    return r;
  });
  for (const auto& r : parts) {
    sup = std::max(sup, r[0]);
    k1 = std::max(k1, r[1]);
    k2 = std::max(k2, r[2]);
  }
  const double h = s.mesh();
  return {sup, (k1 + k2) / (1.0 - h) * h};
}

/// ρ(ν + σ, ν) = k_σ for a seminorm increment σ; tighter than the generic bound.
inline RhoEstimate moved_by_increment(const Seminorm& sigma, const NormedSetting& s) {
  const SphereEstimate k = k_nu(sigma, s);
  return {k.value, k.upper - k.value};
}

struct N0OpenReport {
  bool holds = false;
  double margin = 0.0;  // a_ν - ρ(ν, ν'), the guaranteed lower bound for a_ν'
  double slack = 0.0;   // a_ν' - margin on sampled values
  double tolerance = 0.0;
  SphereEstimate a_nu;
  SphereEstimate a_nu_prime;
  RhoEstimate distance;
  bool prime_equivalent = false;
};

/// a_ν' >= a_ν - ρ(ν, ν'), up to the combined sampling bounds.
inline N0OpenReport n0_open_check(const Seminorm& nu, const Seminorm& nu_prime, const NormedSetting& s) {
  N0OpenReport r;
  r.a_nu = a_nu(nu, s);
  r.a_nu_prime = a_nu(nu_prime, s);
  r.distance = rho(nu, nu_prime, s);
  r.margin = r.a_nu.value - r.distance.value;
  r.slack = r.a_nu_prime.value - r.margin;
  r.tolerance = (r.a_nu.value - r.a_nu.lower) + (r.a_nu_prime.value - r.a_nu_prime.lower) + r.distance.error_bound;
  r.holds = r.slack >= -r.tolerance;
  r.prime_equivalent = r.a_nu_prime.lower > 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Convex bodies

/// Polytope M = conv(vertices) with a finite sample of its points.
class ConvexBody {
 public:
  /// n equally spaced points on [a, b].
  static ConvexBody segment(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    if (a.size() != b.size() || a.empty()) throw DomainError("segment: endpoint dimension mismatch");
    if (n < 2) throw DomainError("segment: need at least 2 sample points");
    ConvexBody m;
    m.dim_ = a.size();
    m.vertices_ = {a, b};
    const double den = static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / den;
      for (std::size_t i = 0; i < m.dim_; ++i) m.sample_.push_back(k == n - 1 ? b[i] : a[i] + t * (b[i] - a[i]));
    }
    double len = 0.0;
    for (std::size_t i = 0; i < m.dim_; ++i) len += (b[i] - a[i]) * (b[i] - a[i]);
    m.mesh_ = std::sqrt(len) / den / 2.0;
    m.validate();
    return m;
  }

  /// Vertices, points along every vertex pair at `spacing`, and the lattice
  /// points of spacing `spacing` that fall inside.
  static ConvexBody polytope(std::vector<std::vector<double>> vertices, double spacing) {
    if (vertices.empty()) throw DomainError("polytope: no vertices");
    if (!(spacing > 0.0)) throw DomainError("polytope: spacing must be positive");
    ConvexBody m;
    m.dim_ = vertices.front().size();
    if (m.dim_ == 0) throw DomainError("polytope: zero dimension");
    for (const auto& v : vertices) {
      if (v.size() != m.dim_) throw DomainError("polytope: ragged vertices");
      for (double c : v)
        if (!std::isfinite(c)) throw DomainError("polytope: non-finite vertex");
    }
    m.vertices_ = std::move(vertices);
    for (const auto& v : m.vertices_) m.sample_.insert(m.sample_.end(), v.begin(), v.end());
    for (std::size_t i = 0; i < m.vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < m.vertices_.size(); ++j) {
        const auto& a = m.vertices_[i];
        const auto& b = m.vertices_[j];
        double len = 0.0;
        for (std::size_t k = 0; k < m.dim_; ++k) len += (b[k] - a[k]) * (b[k] - a[k]);
        const auto steps = static_cast<std::size_t>(std::ceil(std::sqrt(len) / spacing));
        for (std::size_t s = 1; s < steps; ++s) {
          const double t = static_cast<double>(s) / static_cast<double>(steps);
          for (std::size_t k = 0; k < m.dim_; ++k) m.sample_.push_back(a[k] + t * (b[k] - a[k]));
        }
      }
    std::vector<double> lo(m.dim_, std::numeric_limits<double>::infinity()), hi(m.dim_, -std::numeric_limits<double>::infinity());
    for (const auto& v : m.vertices_)
      for (std::size_t k = 0; k < m.dim_; ++k) {
        lo[k] = std::min(lo[k], v[k]);
        hi[k] = std::max(hi[k], v[k]);
      }
    std::vector<std::size_t> counts(m.dim_);
    std::size_t total = 1;
    for (std::size_t k = 0; k < m.dim_; ++k) {
      counts[k] = static_cast<std::size_t>(std::floor((hi[k] - lo[k]) / spacing)) + 1;
      total *= counts[k];
      if (total > 5'000'000) throw DomainError("polytope: lattice too fine");
    }
    std::vector<double> x(m.dim_);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t r = flat;
      for (std::size_t k = 0; k < m.dim_; ++k) {
        x[k] = lo[k] + static_cast<double>(r % counts[k]) * spacing;
        r /= counts[k];
      }
      if (m.distance_to_polytope(x) == 0.0) m.sample_.insert(m.sample_.end(), x.begin(), x.end());
    }
    m.mesh_ = spacing * std::sqrt(static_cast<double>(m.dim_));
    m.validate();
    return m;
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] const std::vector<std::vector<double>>& vertices() const { return vertices_; }
  [[nodiscard]] std::size_t sample_size() const { return sample_.size() / dim_; }
  [[nodiscard]] std::span<const double> sample(std::size_t i) const { return {sample_.data() + i * dim_, dim_}; }
  /// Euclidean covering radius of the sample (recorded, not certified near thin faces).
  [[nodiscard]] double mesh() const { return mesh_; }

  /// Euclidean distance from p to conv(vertices). Enumerates affinely
  /// independent vertex subsets of size <= d+1 and keeps the projections whose
  /// barycentric coordinates are nonnegative (the nearest point lies in the
  /// relative interior of such a face). Returns exactly 0 inside, up to 1e-12
  /// barycentric slack.
  [[nodiscard]] double distance_to_polytope(std::span<const double> p) const {
    if (p.size() != dim_) throw DomainError("distance_to_polytope: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    const std::size_t nv = vertices_.size();
    const std::size_t kmax = std::min(nv, dim_ + 1);
    std::vector<std::size_t> pick;
    for (std::size_t k = 1; k <= kmax; ++k) {
      pick.resize(k);
      std::iota(pick.begin(), pick.end(), std::size_t{0});
      while (true) {
        if (auto d = face_distance(pick, p)) best = std::min(best, *d);
        // next combination
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == nv - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
    return best;
  }

  [[nodiscard]] bool contains(std::span<const double> p) const { return distance_to_polytope(p) == 0.0; }

 private:
  ConvexBody() = default;

  void validate() const {
    for (std::size_t i = 0; i < sample_size(); ++i) {
      // sample points built by interpolation may sit an ulp outside
      if (distance_to_polytope(sample(i)) > 1e-9) throw InvariantError("ConvexBody: sample point outside the polytope");
    }
  }

  // Distance from p to the affine hull of the picked vertices when the
  // projection has nonnegative barycentric coordinates; nullopt otherwise.
  [[nodiscard]] std::optional<double> face_distance(const std::vector<std::size_t>& pick, std::span<const double> p) const {
    const std::size_t m = pick.size() - 1;
    const auto& v0 = vertices_[pick[0]];
    std::vector<double> lambda(m, 0.0);
    if (m > 0) {
      std::vector<double> g(m * m), rhs(m);
      double scale = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const auto& vi = vertices_[pick[i + 1]];
        for (std::size_t j = 0; j < m; ++j) {
          const auto& vj = vertices_[pick[j + 1]];
          double s = 0.0;
          for (std::size_t k = 0; k < dim_; ++k) s += (vi[k] - v0[k]) * (vj[k] - v0[k]);
          g[i * m + j] = s;
        }
        double r = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) r += (vi[k] - v0[k]) * (p[k] - v0[k]);
        rhs[i] = r;
        scale = std::max(scale, g[i * m + i]);
      }
      // Gaussian elimination with partial pivoting
      for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
          if (std::abs(g[r * m + c]) > std::abs(g[piv * m + c])) piv = r;
        if (std::abs(g[piv * m + c]) <= 1e-12 * scale) return std::nullopt;  // affinely dependent
        if (piv != c) {
          for (std::size_t j = 0; j < m; ++j) std::swap(g[c * m + j], g[piv * m + j]);
          std::swap(rhs[c], rhs[piv]);
        }
        for (std::size_t r = c + 1; r < m; ++r) {
          const double f = g[r * m + c] / g[c * m + c];
          for (std::size_t j = c; j < m; ++j) g[r * m + j] -= f * g[c * m + j];
          rhs[r] -= f * rhs[c];
        }
      }
      for (std::size_t c = m; c-- > 0;) {
        double s = rhs[c];
        for (std::size_t j = c + 1; j < m; ++j) s -= g[c * m + j] * lambda[j];
        lambda[c] = s / g[c * m + c];
      }
    }
    double l0 = 1.0;
    for (double l : lambda) {
      if (l < -1e-12) return std::nullopt;
      l0 -= l;
    }
    if (l0 < -1e-12) return std::nullopt;
    double d2 = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double q = v0[k];
      for (std::size_t i = 0; i < m; ++i) q += lambda[i] * (vertices_[pick[i + 1]][k] - v0[k]);
      d2 += (p[k] - q) * (p[k] - q);
      ref = std::max(ref, std::abs(p[k]));
    }
    const double d = std::sqrt(d2);
    // residue of an interior point is rounding noise
    return d <= 1e-12 * (1.0 + ref) ? 0.0 : d;
  }

  std::size_t dim_ = 0;
  std::vector<std::vector<double>> vertices_;
  std::vector<double> sample_;
  double mesh_ = 0.0;
};

// ---------------------------------------------------------------------------
// Metric projection

struct ProjectionReport {
  double dist = 0.0;
  std::vector<std::size_t> argmin;  // exact minimizers over the sample
  std::vector<double> delta_grid;
  std::vector<double> diam_values;  // diam of {x : ν(p-x) <= dist + δ} in the base norm
  std::vector<std::size_t> set_sizes;

  /// Largest grid δ whose δ-argmin set has diameter < target.
  [[nodiscard]] std::optional<std::size_t> best_delta(double target) const {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < delta_grid.size(); ++k)
      if (diam_values[k] < target && (!best || delta_grid[k] > delta_grid[*best])) best = k;
    return best;
  }
};

namespace detail {

inline std::vector<double> projection_values(const Seminorm& nu, const ConvexBody& m, std::span<const double> p) {
  const std::size_t n = m.sample_size();
  std::vector<double> v(n);
  parallel_chunks<int>(
      n,
      [&](std::size_t lo, std::size_t hi) {
        std::vector<double> y(m.dim());
        for (std::size_t i = lo; i < hi; ++i) {
          auto x = m.sample(i);
          for (std::size_t k = 0; k < y.size(); ++k) y[k] = p[k] - x[k];
          v[i] = nu(y);
        }
        return 0;
      },
      512);
  return v;
}

// Sample indices sorted by (value, index).
inline std::vector<std::size_t> ranked(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return order;
}

}  // namespace detail

/// Exact enumeration over the sample of M: dist = min ν(p - x) and the
/// diameter of every δ-argmin set. The sets are prefixes of the value order,
/// so diameters are accumulated incrementally.
inline ProjectionReport metric_projection(const Seminorm& nu, const ConvexBody& m, std::span<const double> p,
                                          const std::vector<double>& delta_grid, const Seminorm& ambient) {
  if (m.sample_size() == 0) throw DomainError("metric_projection: empty sample");
  if (p.size() != m.dim() || nu.dim() != m.dim() || ambient.dim() != m.dim())
    throw DomainError("metric_projection: dimension mismatch");
  for (double d : delta_grid)
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("metric_projection: delta must be finite and >= 0");
  const std::vector<double> v = detail::projection_values(nu, m, p);
  const std::vector<std::size_t> order = detail::ranked(v);

  ProjectionReport r;
  r.dist = v[order.front()];
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] <= r.dist) r.argmin.push_back(i);
  r.delta_grid = delta_grid;
  r.diam_values.assign(delta_grid.size(), 0.0);
  r.set_sizes.assign(delta_grid.size(), 0);

  std::vector<std::size_t> by_delta(delta_grid.size());
  std::iota(by_delta.begin(), by_delta.end(), std::size_t{0});
  std::sort(by_delta.begin(), by_delta.end(), [&](std::size_t a, std::size_t b) { return delta_grid[a] < delta_grid[b]; });

  std::size_t have = 0;
  double current = 0.0;
  std::vector<double> diff(m.dim());
  for (std::size_t k : by_delta) {
    const double level = r.dist + delta_grid[k];
    std::size_t want = have;
    while (want < order.size() && v[order[want]] <= level) ++want;
    for (; have < want; ++have) {
      auto xj = m.sample(order[have]);
      for (std::size_t i = 0; i < have; ++i) {
        auto xi = m.sample(order[i]);
        for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = xj[c] - xi[c];
        current = std::max(current, ambient(diff));
      }
    }
    r.diam_values[k] = current;
    r.set_sizes[k] = have;
  }
  return r;
}

inline ProjectionReport metric_projection(const Seminorm& nu, const ConvexBody& m, std::span<const double> p,
                                          const std::vector<double>& delta_grid, const NormedSetting& s) {
  return metric_projection(nu, m, p, delta_grid, s.base());
}

/// c(p) = max over the sample of base(p - x).
inline double c_of_p(const ConvexBody& m, std::span<const double> p, const NormedSetting& s) {
  if (m.sample_size() == 0) throw DomainError("c_of_p: empty sample");
  if (p.size() != m.dim()) throw DomainError("c_of_p: dimension mismatch");
  const std::vector<double> v = detail::projection_values(s.base(), m, p);
  return *std::max_element(v.begin(), v.end());
}

/// ν + ε·min_t base(· - t x*).
inline Seminorm stech_perturb_seminorm(const Seminorm& nu, const std::vector<double>& x_star, double eps,
                                       const NormedSetting& s) {
  if (!(eps > 0.0)) throw DomainError("stech_perturb_seminorm: eps must be positive");
  s.check_dim(nu);
  return nu + Seminorm::scale(eps, Seminorm::line_quotient(s.base(), x_star));
}

// ---------------------------------------------------------------------------
// Single-point well-posing

enum class WellposeBranch { inside, line_quotient, second_minimizer, fallback };

inline const char* to_string(WellposeBranch b) {
  switch (b) {
    case WellposeBranch::inside: return "inside";
    case WellposeBranch::line_quotient: return "line_quotient";
    case WellposeBranch::second_minimizer: return "second_minimizer";
    case WellposeBranch::fallback: return "fallback";
  }
  return "?";
}

struct WellposeReport {
  Seminorm nu_prime;
  Seminorm increment;  // nu_prime = nu + increment
  WellposeBranch branch = WellposeBranch::inside;
  bool success = false;
  std::optional<std::size_t> anchor;  // sample index x with x* = p - x
  double delta = 0.0;
  double achieved_diam = 0.0;
  RhoEstimate moved;
  ProjectionReport projection;
};

/// Default δ grid for the Stečkin side: target, target/2, ..., target/2^40.
inline std::vector<double> steckin_delta_grid(double target) { return geometric_grid(target, 40); }

/// Moves ν by at most ε (in ρ) so that p has a δ-argmin set of diameter
/// < diam_target (default ε) over the sample of M.
///
/// Outside M: ν̃ = ν + (ε/2)·base, x* = p - (best sample point for ν̃), and
/// ν' = ν̃ + (ε/2)·LQ(base, x*). The line-quotient term vanishes exactly in the
/// direction of the chosen point, which separates it from the rest of M. If no
/// grid δ works the second-ranked point is tried, then ν + ε·base.
inline WellposeReport wellpose_point(const Seminorm& nu, const ConvexBody& m, const std::vector<double>& p, double eps,
                                     const NormedSetting& s, const std::vector<double>& delta_grid = {},
                                     std::optional<double> diam_target = std::nullopt) {
  if (!(eps > 0.0)) throw DomainError("wellpose_point: eps must be positive");
  s.check_dim(nu);
  if (p.size() != s.dim() || m.dim() != s.dim()) throw DomainError("wellpose_point: dimension mismatch");
  const double target = diam_target.value_or(eps);
  if (!(target > 0.0)) throw DomainError("wellpose_point: diam target must be positive");
  const std::vector<double> grid = delta_grid.empty() ? steckin_delta_grid(target) : delta_grid;
  const Seminorm& base = s.base();

  auto attempt = [&](const Seminorm& increment, WellposeBranch branch, std::optional<std::size_t> anchor) {
    Seminorm nu_prime = nu + increment;
    ProjectionReport proj = metric_projection(nu_prime, m, p, grid, base);
    const auto best = proj.best_delta(target);
    WellposeReport r{nu_prime, increment, branch, best.has_value(), anchor, 0.0, 0.0, moved_by_increment(increment, s),
                     std::move(proj)};
    if (best) {
      r.delta = r.projection.delta_grid[*best];
      r.achieved_diam = r.projection.diam_values[*best];
    }
    return r;
  };

  const Seminorm full = Seminorm::scale(eps, base);
  if (m.contains(p)) return attempt(full, WellposeBranch::inside, std::nullopt);

  const Seminorm half = Seminorm::scale(eps / 2.0, base);
  const Seminorm tilde = nu + half;
  const std::vector<double> v = detail::projection_values(tilde, m, p);
  const std::vector<std::size_t> order = detail::ranked(v);
  for (std::size_t rank = 0; rank < std::min<std::size_t>(2, order.size()); ++rank) {
    const std::size_t a = order[rank];
    std::vector<double> x_star(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) x_star[k] = p[k] - m.sample(a)[k];
    // p outside M keeps x* away from 0
    const Seminorm inc = half + Seminorm::scale(eps / 2.0, Seminorm::line_quotient(base, x_star));
    WellposeReport r = attempt(inc, rank == 0 ? WellposeBranch::line_quotient : WellposeBranch::second_minimizer, a);
    if (r.success) return r;
  }
  return attempt(full, WellposeBranch::fallback, std::nullopt);
}

// ---------------------------------------------------------------------------
// Iterated renorming over a finite witness set

struct RenormStep {
  std::size_t witness = 0;
  std::vector<double> p;
  double eps = 0.0;     // allowance ε_i (0 when skipped)
  double delta = 0.0;   // δ_i with diam Ω(δ_i) < target right after this step
  double c_p = 0.0;
  double radius = 0.0;  // δ_i / (3 c(p_i))
  double achieved_diam = 0.0;
  RhoEstimate moved;
  bool skipped = false;
  WellposeBranch branch = WellposeBranch::inside;
  std::optional<Seminorm> increment;
};

struct BudgetLedger {
  double total = 0.0;
  double remaining = 0.0;  // total minus the certified upper bounds of all moves
  std::vector<RenormStep> steps;
};

struct PointModulus {
  std::vector<double> p;
  ProjectionReport projection;
  std::optional<double> delta;
  double diam = 0.0;
  bool ok = false;
};

enum class RenormStatus { success, budget_exhausted };

struct RenormReport {
  Seminorm nu_final;
  RenormStatus status = RenormStatus::success;
  std::string message;
  BudgetLedger ledger;
  std::vector<PointModulus> moduli;  // replay of the final norm at every witness
  RhoEstimate total_move;            // sampled ρ(ν_final, ν0)
  double move_bound = 0.0;           // Σ certified step moves
  SphereEstimate a_final;
  bool replay_ok = false;
};

namespace detail {

inline PointModulus replay_point(const Seminorm& nu, const ConvexBody& m, const std::vector<double>& p,
                                 std::vector<double> grid, double target, const NormedSetting& s) {
  std::sort(grid.begin(), grid.end(), std::greater<>());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  PointModulus pm{p, metric_projection(nu, m, p, grid, s.base()), std::nullopt, 0.0, false};
  if (auto b = pm.projection.best_delta(target)) {
    pm.delta = pm.projection.delta_grid[*b];
    pm.diam = pm.projection.diam_values[*b];
    pm.ok = true;
  } else {
    pm.diam = pm.projection.diam_values.empty() ? 0.0 : pm.projection.diam_values.back();
  }
  return pm;
}

}  // namespace detail

/// Well-poses projection at every p in W with one norm.
///
/// Step i spends ε_i = ½·min(remaining budget, remaining protection slack of
/// every earlier step). Step i's claim diam Ω(δ_i) < 1/n_target survives any
/// later total move below δ_i/(3c(p_i)) at level δ_i/3, by the ε/3 inclusion
/// lemma, since |ν(p-x) - ν'(p-x)| <= ρ(ν,ν')·c(p_i). A witness already well
/// posed under the current norm costs nothing but still records its radius.
inline RenormReport baire_renorm(const Seminorm& nu0, const ConvexBody& m, const std::vector<std::vector<double>>& W,
                                 double eps_total, std::size_t n_target, const NormedSetting& s,
                                 const std::vector<double>& delta_grid = {}) {
  if (W.empty()) throw DomainError("baire_renorm: empty witness set");
  if (n_target < 1) throw DomainError("baire_renorm: n_target must be >= 1");
  if (!(eps_total > 0.0)) throw DomainError("baire_renorm: eps_total must be positive");
  s.check_dim(nu0);
  const SphereEstimate a0 = a_nu(nu0, s);
  if (!(eps_total < a0.lower))
    throw PreconditionError("baire_renorm: eps_total must be below a_nu(nu0) (certified lower bound " +
                            std::to_string(a0.lower) + ")");
  const double target = 1.0 / static_cast<double>(n_target);
  const std::vector<double> grid = delta_grid.empty() ? steckin_delta_grid(target) : delta_grid;

  RenormReport rep{nu0, RenormStatus::success, {}, {eps_total, eps_total, {}}, {}, {}, 0.0, {}, false};
  std::vector<double> slack;  // per step: radius minus all later moves
  Seminorm nu = nu0;
  for (std::size_t w = 0; w < W.size(); ++w) {
    const std::vector<double>& p = W[w];
    if (p.size() != s.dim()) throw DomainError("baire_renorm: witness dimension mismatch");
    RenormStep step;
    step.witness = w;
    step.p = p;
    step.c_p = c_of_p(m, p, s);

    const ProjectionReport now = metric_projection(nu, m, p, grid, s.base());
    if (auto b = now.best_delta(target)) {
      step.skipped = true;
      step.delta = now.delta_grid[*b];
      step.achieved_diam = now.diam_values[*b];
    } else {
      double allowance = rep.ledger.remaining;
      for (double sl : slack) allowance = std::min(allowance, sl);
      allowance *= 0.5;
      if (!(allowance > 0.0)) {
        rep.status = RenormStatus::budget_exhausted;
        rep.message = "no budget left at witness " + std::to_string(w);
        break;
      }
      WellposeReport wp = wellpose_point(nu, m, p, allowance, s, grid, target);
      if (!wp.success) {
        rep.status = RenormStatus::budget_exhausted;
        rep.message = "allowance " + std::to_string(allowance) + " cannot well-pose witness " + std::to_string(w);
        break;
      }
      const double mv = wp.moved.upper();
      for (double sl : slack)
        if (!(mv < sl)) throw InvariantError("baire_renorm: move exceeds an earlier protection radius");
      if (!(mv <= rep.ledger.remaining)) throw InvariantError("baire_renorm: move exceeds the remaining budget");
      for (double& sl : slack) sl -= mv;
      rep.ledger.remaining -= mv;
      rep.move_bound += mv;
      step.eps = allowance;
      step.delta = wp.delta;
      step.achieved_diam = wp.achieved_diam;
      step.moved = wp.moved;
      step.branch = wp.branch;
      step.increment = wp.increment;
      nu = wp.nu_prime;
    }
    step.radius = step.delta / (3.0 * step.c_p);
    slack.push_back(step.radius);
    rep.ledger.steps.push_back(std::move(step));
  }
  rep.nu_final = nu;
  rep.total_move = rho(nu, nu0, s);
  rep.a_final = a_nu(nu, s);

  rep.replay_ok = true;
  for (const auto& p : W) {
    std::vector<double> g = grid;
    for (const auto& st : rep.ledger.steps) g.push_back(st.delta / 3.0);
    rep.moduli.push_back(detail::replay_point(nu, m, p, g, target, s));
    rep.replay_ok = rep.replay_ok && rep.moduli.back().ok;
  }
  // only a completed run makes claims at every witness
  if (rep.status == RenormStatus::success && !rep.replay_ok)
    throw InvariantError("baire_renorm: final norm fails the replay at a witness");
  return rep;
}

struct AblationReport {
  std::vector<bool> necessary;  // per ledger step; skipped steps are never necessary
  [[nodiscard]] bool any_necessary() const { return std::find(necessary.begin(), necessary.end(), true) != necessary.end(); }
};

/// Rebuilds the final norm without each non-skipped step and replays every
/// witness; a step is necessary when some witness then fails.
inline AblationReport ablation_replay(const RenormReport& rep, const Seminorm& nu0, const ConvexBody& m,
                                      const std::vector<std::vector<double>>& W, std::size_t n_target,
                                      const NormedSetting& s, const std::vector<double>& delta_grid = {}) {
  const double target = 1.0 / static_cast<double>(n_target);
  const std::vector<double> grid = delta_grid.empty() ? steckin_delta_grid(target) : delta_grid;
  AblationReport out;
  for (std::size_t i = 0; i < rep.ledger.steps.size(); ++i) {
    if (!rep.ledger.steps[i].increment) {
      out.necessary.push_back(false);
      continue;
    }
    Seminorm nu = nu0;
    for (std::size_t j = 0; j < rep.ledger.steps.size(); ++j)
      if (j != i && rep.ledger.steps[j].increment) nu = nu + *rep.ledger.steps[j].increment;
    bool all_ok = true;
    for (const auto& p : W) {
      std::vector<double> g = grid;
      for (const auto& st : rep.ledger.steps) g.push_back(st.delta / 3.0);
      all_ok = all_ok && detail::replay_point(nu, m, p, g, target, s).ok;
    }
    out.necessary.push_back(!all_ok);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The Stečkin family as a perturbation space: P a finite set of points,
// X the sample of M, g_p(x) = ν(p - x), ρ the sampled seminorm metric.

class SteckinSpace {
 public:
  using element_type = Seminorm;

  SteckinSpace(NormedSetting setting, ConvexBody body, std::vector<std::vector<double>> points)
      : setting_(std::move(setting)), body_(std::move(body)), points_(std::move(points)),
        params_(share(FiniteMetricSpace::point_cloud(points_, Metric::euclidean))) {
    if (body_.dim() != setting_.dim()) throw DomainError("SteckinSpace: dimension mismatch");
    const std::size_t n = body_.sample_size();
    std::vector<double> mat(n * n, 0.0);
    std::vector<double> diff(body_.dim());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = body_.sample(i)[k] - body_.sample(j)[k];
        mat[i * n + j] = mat[j * n + i] = setting_.base()(diff);
      }
    domain_ = share(FiniteMetricSpace::from_matrix(n, std::move(mat)));
    for (const auto& p : points_) c_.push_back(c_of_p(body_, p, setting_));
  }

  [[nodiscard]] const SpaceRef& domain() const { return domain_; }
  [[nodiscard]] const ParameterGrid& params() const { return params_; }
  [[nodiscard]] const NormedSetting& setting() const { return setting_; }

  /// f_p ≡ 0 for every p: the problem is min over M of g_p.
  [[nodiscard]] ParametricFamily zero_family() const {
    std::vector<ObjectiveFunction> t(points_.size(), ObjectiveFunction::constant(domain_, 0.0));
    return {params_, domain_, std::move(t)};
  }

  [[nodiscard]] PerturbationFamily table(const Seminorm& nu) const {
    std::vector<PerturbationFunction> t;
    for (const auto& p : points_) t.emplace_back(domain_, detail::projection_values(nu, body_, p));
    return {params_, domain_, std::move(t), "seminorm"};
  }
  [[nodiscard]] Distance rho(const Seminorm& a, const Seminorm& b) const {
    const RhoEstimate r = wellpose::rho(a, b, setting_);
    return {r.value, r.error_bound};
  }
  [[nodiscard]] Seminorm add(const Seminorm& a, const Seminorm& b) const { return a + b; }
  [[nodiscard]] std::optional<double> declared_constant(std::size_t p) const { return c_.at(p); }
  [[nodiscard]] Improvement<Seminorm> improve(const ObjectiveFunction&, const Seminorm& nu, std::size_t p, double eps) const {
    WellposeReport r = wellpose_point(nu, body_, points_.at(p), eps, setting_);
    return {r.nu_prime, r.delta};
  }

 private:
  NormedSetting setting_;
  ConvexBody body_;
  std::vector<std::vector<double>> points_;
  ParameterGrid params_;
  SpaceRef domain_;
  std::vector<double> c_;
};

}  // namespace wellpose
