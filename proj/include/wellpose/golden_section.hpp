#pragma once

#include <cmath>
#include <limits>

#include "wellpose/error.hpp"

namespace wellpose {

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for a unimodal (here: convex) f on [lo, hi].
///
/// Stops after `max_iter` iterations or once the bracket is no wider than
/// rel_tol * max(1, |lo|, |hi|), or once it stops shrinking in floating point.
/// Returns the best of the evaluated interior points and the bracket ends.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, int max_iter = 200, double rel_tol = 1e-10) {
  if (!(lo <= hi)) throw DomainError("golden_section_minimize: empty bracket");
  constexpr double inv_phi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  ScalarMinimum best{c, fc, 0};
  if (fd < best.value) best = {d, fd, 0};
  int it = 0;
  for (; it < max_iter; ++it) {
    const double width = b - a;
    if (width <= rel_tol * std::fmax(1.0, std::fmax(std::abs(a), std::abs(b)))) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc, 0};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd, 0};
    }
    if (!(b - a < width)) break;  // floating-point stagnation
  }
  const double fa = f(a), fb = f(b);
  if (fa < best.value) best = {a, fa, 0};
  if (fb < best.value) best = {b, fb, 0};
  best.iterations = it;
  return best;
}

}  // namespace wellpose
