#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

namespace ttlopt::numeric {

/// Bisection on a bracket [lo, hi] where f(lo) and f(hi) have opposite
/// signs. Stops when the bracket is below `xtol` (absolute) or after
/// `max_iter` halvings. Throws NumericalFailure if there is no sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 0.0, int max_iter = 400);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int max_depth = 50);

/// Golden-section search for the maximizer of a unimodal f on [a, b].
/// Returns (argmax, max).
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double a, double b, double xtol = 1e-12);

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -INFINITY) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace ttlopt::numeric
