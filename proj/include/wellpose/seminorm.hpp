#pragma once

// Seminorms on R^d as immutable expression trees.
//
//   abs_linear(a)          x ↦ |<a,x>|
//   euclidean(d)           x ↦ ‖x‖₂
//   max_of(children)       pointwise max
//   sum(children)          pointwise sum
//   scale(c, child)        c·child, c >= 0
//   line_quotient(base, v) x ↦ min_t base(x - t v), base a norm, v != 0
//
// Each combinator preserves homogeneity and subadditivity, so every tree is a
// seminorm.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "wellpose/error.hpp"
#include "wellpose/golden_section.hpp"

namespace wellpose {

class Seminorm {
 public:
  enum class Kind { abs_linear, euclidean, max_of, sum, scale, line_quotient };

  static Seminorm abs_linear(std::vector<double> a) {
    if (a.empty()) throw DomainError("abs_linear: empty coefficient vector");
    for (double v : a)
      if (!std::isfinite(v)) throw DomainError("abs_linear: non-finite coefficient");
    auto n = std::make_shared<Node>();
    n->kind = Kind::abs_linear;
    n->dim = a.size();
    n->vec = std::move(a);
    return Seminorm(std::move(n));
  }

  static Seminorm euclidean(std::size_t dim) {
    if (dim == 0) throw DomainError("euclidean: dimension must be positive");
    auto n = std::make_shared<Node>();
    n->kind = Kind::euclidean;
    n->dim = dim;
    return Seminorm(std::move(n));
  }

  static Seminorm max_of(std::vector<Seminorm> children) { return combine(Kind::max_of, std::move(children)); }
  static Seminorm sum(std::vector<Seminorm> children) { return combine(Kind::sum, std::move(children)); }

  static Seminorm scale(double c, Seminorm child) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("scale: factor must be finite and >= 0");
    auto n = std::make_shared<Node>();
    n->kind = Kind::scale;
    n->dim = child.dim();
    n->c = c;
    n->children.push_back(std::move(child));
    return Seminorm(std::move(n));
  }

  static Seminorm line_quotient(Seminorm base, std::vector<double> direction) {
    if (direction.size() != base.dim()) throw DomainError("line_quotient: dimension mismatch");
    if (std::all_of(direction.begin(), direction.end(), [](double v) { return v == 0.0; }))
      throw DomainError("line_quotient: zero direction");
    const double dn = base(direction);
    if (!(dn > 0.0)) throw DomainError("line_quotient: base vanishes along the direction (not a norm)");
    auto n = std::make_shared<Node>();
    n->kind = Kind::line_quotient;
    n->dim = base.dim();
    n->vec = std::move(direction);
    n->c = dn;
    n->children.push_back(std::move(base));
    return Seminorm(std::move(n));
  }

  [[nodiscard]] Kind kind() const { return node_->kind; }
  [[nodiscard]] std::size_t dim() const { return node_->dim; }
  /// abs_linear coefficients or line_quotient direction.
  [[nodiscard]] const std::vector<double>& vector() const { return node_->vec; }
  [[nodiscard]] const std::vector<Seminorm>& children() const { return node_->children; }
  /// scale factor.
  [[nodiscard]] double factor() const { return node_->c; }

  [[nodiscard]] double operator()(std::span<const double> x) const {
    if (x.size() != dim()) throw DomainError("seminorm evaluation: dimension mismatch");
    return eval(x);
  }
  [[nodiscard]] double operator()(const std::vector<double>& x) const { return (*this)(std::span<const double>(x)); }

  /// L with ν(x) <= L ‖x‖₂; also a Lipschitz constant w.r.t. ‖·‖₂.
  [[nodiscard]] double euclidean_bound() const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::abs_linear: return std::sqrt(std::inner_product(n.vec.begin(), n.vec.end(), n.vec.begin(), 0.0));
      case Kind::euclidean: return 1.0;
      case Kind::max_of: {
        double m = 0.0;
        for (const auto& c : n.children) m = std::max(m, c.euclidean_bound());
        return m;
      }
      case Kind::sum: {
        double s = 0.0;
        for (const auto& c : n.children) s += c.euclidean_bound();
        return s;
      }
      case Kind::scale: return n.c * n.children.front().euclidean_bound();
      case Kind::line_quotient: return n.children.front().euclidean_bound();
    }
    return 0.0;
  }

  friend Seminorm operator+(const Seminorm& a, const Seminorm& b) { return sum({a, b}); }
  friend Seminorm operator*(double c, const Seminorm& a) { return scale(c, a); }

 private:
  struct Node {
    Kind kind = Kind::euclidean;
    std::size_t dim = 0;
    std::vector<double> vec;
    std::vector<Seminorm> children;
    double c = 0.0;  // scale factor, or base(direction) for line_quotient
  };

  explicit Seminorm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Seminorm combine(Kind kind, std::vector<Seminorm> children) {
    if (children.empty()) throw DomainError("max_of/sum: no children");
    const std::size_t d = children.front().dim();
    for (const auto& c : children)
      if (c.dim() != d) throw DomainError("max_of/sum: dimension mismatch");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->dim = d;
    n->children = std::move(children);
    return Seminorm(std::move(n));
  }

  [[nodiscard]] double eval(std::span<const double> x) const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::abs_linear: {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += n.vec[i] * x[i];
        return std::abs(s);
      }
      case Kind::euclidean: {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
      }
      case Kind::max_of: {
        double m = 0.0;
        for (const auto& c : n.children) m = std::max(m, c.eval(x));
        return m;
      }
      case Kind::sum: {
        double s = 0.0;
        for (const auto& c : n.children) s += c.eval(x);
        return s;
      }
      case Kind::scale: return n.c * n.children.front().eval(x);
      case Kind::line_quotient: return eval_line_quotient(x);
    }
    return 0.0;
  }

  // t ↦ base(x - t v) is convex. Its minimizer satisfies
  // base(t v) <= base(x) + base(x - t v) <= 2 base(x), so |t| <= 2 base(x)/base(v).
  // The search runs to floating-point resolution; 200 iterations shrink the
  // bracket by 0.618^200, far past the 1e-10 relative contract.
  [[nodiscard]] double eval_line_quotient(std::span<const double> x) const {
    const Node& n = *node_;
    const Seminorm& base = n.children.front();
    const double bx = base.eval(x);
    if (bx == 0.0) return 0.0;
    const double bound = 2.0 * bx / n.c;
    std::vector<double> y(x.size());
    auto at = [&](double t) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - t * n.vec[i];
      return base.eval(y);
    };
    const ScalarMinimum m = golden_section_minimize(at, -bound, bound, 200, 0.0);
    return std::min(m.value, bx);
  }

  std::shared_ptr<const Node> node_;
};

/// max_i |x_i|
inline Seminorm max_abs_norm(std::size_t dim) {
  std::vector<Seminorm> parts;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    parts.push_back(Seminorm::abs_linear(std::move(e)));
  }
  return Seminorm::max_of(std::move(parts));
}

/// Σ_i |x_i|
inline Seminorm l1_norm(std::size_t dim) {
  std::vector<Seminorm> parts;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    parts.push_back(Seminorm::abs_linear(std::move(e)));
  }
  return Seminorm::sum(std::move(parts));
}

}  // namespace wellpose
