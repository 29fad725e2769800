#include "ttlopt/utility.hpp"

#include <fmt/core.h>

#include <cmath>

#include "ttlopt/error.hpp"

namespace ttlopt {

namespace {

void check(const UtilitySpec& s) {
  if (!(s.w > 0.0)) throw InvalidInstance(fmt::format("utility weight must be > 0, got {}", s.w));
  if (!(s.beta >= 0.0)) throw InvalidInstance(fmt::format("beta must be >= 0, got {}", s.beta));
}

constexpr double kEulerGamma = 0.57721566490153286061;

// Ei(y) for real y != 0. Power series for moderate |y|, continued fraction
// for E1 on the negative axis, asymptotic series for large positive y.
double expint_ei(double y) {
  const double ay = std::fabs(y);
  if (y < -1.0) {
    // Ei(y) = -E1(-y), Lentz continued fraction.
    const double z = -y;
    double b = z + 1.0;
    double c = 1.0 / 1e-300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
      const double an = -static_cast<double>(i) * i;
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const double del = c * d;
      h *= del;
      if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return -h * std::exp(-z);
  }
  if (ay <= 40.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= y / k;
      const double add = term / k;
      sum += add;
      if (std::fabs(add) < 1e-17 * std::fabs(sum)) break;
    }
    return kEulerGamma + std::log(ay) + sum;
  }
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * k / y;
    if (std::fabs(next) > std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-17) break;
  }
  return std::exp(y) / y * sum;
}

}  // namespace

double utility(const UtilitySpec& spec, double x) {
  check(spec);
  if (!(x > 0.0)) throw DomainError(fmt::format("utility argument must be > 0, got {}", x));
  if (spec.beta == 1.0) return spec.w * std::log(x);
  return spec.w * std::pow(x, 1.0 - spec.beta) / (1.0 - spec.beta);
}

double utility_prime(const UtilitySpec& spec, double x) {
  check(spec);
  if (!(x > 0.0)) throw DomainError(fmt::format("utility argument must be > 0, got {}", x));
  return spec.w * std::pow(x, -spec.beta);
}

double utility_prime_inv(const UtilitySpec& spec, double y) {
  check(spec);
  if (spec.beta == 0.0) throw DomainError("marginal utility is constant at beta = 0 and has no inverse");
  if (!(y > 0.0)) throw DomainError(fmt::format("inverse marginal argument must be > 0, got {}", y));
  return std::pow(spec.w / y, 1.0 / spec.beta);
}

UtilityPoint beta_utility(const UtilitySpec& spec, double x) {
  return {utility(spec, x), utility_prime(spec, x)};
}

double li(double x) {
  if (!(x >= 0.0)) throw DomainError(fmt::format("li: x must be >= 0, got {}", x));
  if (x == 1.0) throw SingularError("li is singular at x = 1");
  if (x == 0.0) return 0.0;
  return expint_ei(std::log(x));
}

double lru_utility(double mu, double x) {
  if (!(mu > 0.0)) throw DomainError("lru_utility: mu must be > 0");
  if (!(x >= 0.0 && x <= mu)) throw DomainError(fmt::format("lru_utility: hit rate {} outside [0, mu]", x));
  return mu * li(mu * (1.0 - x));
}

}  // namespace ttlopt
