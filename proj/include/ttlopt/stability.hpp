#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ttlopt/catalog.hpp"

namespace ttlopt {

struct DualValues {
  double D;
  double delta_v;
};

/// Poisson dual function D(eta) = -W log eta - W + eta B (constant dropped)
/// and the one-step change Delta V = D(f(eta)) - D(eta) of the recursion
/// f(eta) = eta + gamma (W/eta - B). Throws DomainError when f(eta) <= 0.
DualValues dual_fn_and_delta_v(double eta, double W, double B, double gamma);
double dual_fn(double eta, double W, double B);

/// Poisson local threshold 2W/B^2.
double poisson_threshold(double W, double B);

/// A*(x) for a generalized Pareto content under log utility: the magnitude of
/// d occupancy / d eta at hit probability x.
double pareto_a_star(double k, double w, double x);
/// max over x in [0, 1] of pareto_a_star (the x -> 1 limit included).
double pareto_a_star_max(double k, double w);
/// 2 / (n max_i max_x A*_i). Every content must be generalized Pareto.
double pareto_threshold(const Catalog& catalog);

/// Nonzero root x of 1 + m(m-1)x = exp((m-1)x). Throws DomainError at m = 1.
double gamma_star_schedule(double m);

/// Step size gamma(eta) = fraction * gamma_star_schedule(eta*/eta) W/B^2,
/// using the m -> 1 limit of 2 near the equilibrium.
double scheduled_gamma(double eta, double W, double B, double fraction);

enum class Verdict { Converged, Oscillating, Diverged };
std::string verdict_name(Verdict v);

struct StabilityReport {
  double eta_star = 0.0;
  double gamma_star = 0.0;
  std::vector<double> trajectory;
  Verdict verdict = Verdict::Oscillating;
  bool projected = false;  // an iterate was projected to 0
};

/// Iterates eta <- max{0, eta + gamma(eta) (W/eta - B)} for `steps` steps
/// and classifies the trajectory. Stops early when an iterate hits 0.
StabilityReport simulate_recursion(double eta0, const std::function<double(double)>& gamma, double W, double B,
                                   std::size_t steps);
StabilityReport simulate_recursion(double eta0, double gamma, double W, double B, std::size_t steps);

/// Classifier used by simulate_recursion.
Verdict classify(const std::vector<double>& trajectory, double eta_star, bool projected);

}  // namespace ttlopt
