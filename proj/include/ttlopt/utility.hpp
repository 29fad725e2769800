#pragma once

namespace ttlopt {

struct UtilitySpec {
  double beta = 1.0;
  double w = 1.0;
};

/// Isoelastic utility U(x) = w x^(1-beta)/(1-beta), w log x at beta = 1.
double utility(const UtilitySpec& spec, double x);
double utility_prime(const UtilitySpec& spec, double x);
/// Inverse marginal, (w/y)^(1/beta). Throws DomainError at beta = 0.
double utility_prime_inv(const UtilitySpec& spec, double y);

struct UtilityPoint {
  double U;
  double U_prime;
};

UtilityPoint beta_utility(const UtilitySpec& spec, double x);

/// Logarithmic integral li(x) = integral_0^x dt / log t, principal value for
/// x > 1. Throws SingularError at x = 1.
double li(double x);

/// Reverse-engineered LRU utility mu * li(mu (1 - x)).
double lru_utility(double mu, double x);

}  // namespace ttlopt
