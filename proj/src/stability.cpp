#include "ttlopt/stability.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "ttlopt/error.hpp"
#include "ttlopt/numeric.hpp"

namespace ttlopt {

double dual_fn(double eta, double W, double B) {
  if (!(eta > 0.0)) throw DomainError("dual function needs eta > 0");
  return -W * std::log(eta) - W + eta * B;
}

DualValues dual_fn_and_delta_v(double eta, double W, double B, double gamma) {
  if (!(eta > 0.0)) throw DomainError("Delta V needs eta > 0");
  const double drift = W / eta - B;
  const double arg = 1.0 + gamma / eta * drift;
  if (!(arg > 0.0)) {
    throw DomainError(fmt::format("recursion leaves (0, inf) at eta = {} (log argument {})", eta, arg));
  }
  return {dual_fn(eta, W, B), -W * std::log(arg) + B * gamma * drift};
}

double poisson_threshold(double W, double B) { return 2.0 * W / (B * B); }

double pareto_a_star(double k, double w, double x) {
  if (x >= 1.0) {
    if (k == 0.0) return 1.0 / w;
    if (k < 0.5) return 0.0;
    if (k == 0.5) return 0.25 / (w * 0.5);
    return std::numeric_limits<double>::infinity();
  }
  return (1.0 - k) * (1.0 - k) * x * x * std::pow(1.0 - x, 1.0 - 2.0 * k) / (w * (1.0 - x * (1.0 - k)));
}

double pareto_a_star_max(double k, double w) {
  const auto [x, inner] = numeric::golden_max([&](double x) { return pareto_a_star(k, w, x); }, 0.0, 1.0 - 1e-12);
  (void)x;
  return std::max(inner, pareto_a_star(k, w, 1.0));
}

double pareto_threshold(const Catalog& catalog) {
  double best = 0.0;
  for (const auto& c : catalog.contents) {
    const auto* p = std::get_if<GeneralizedPareto>(&c.model.variant());
    if (p == nullptr) throw InvalidInstance("pareto_threshold: every content must be generalized Pareto");
    best = std::max(best, pareto_a_star_max(p->k, c.w));
  }
  return 2.0 / (static_cast<double>(catalog.n()) * best);
}

double gamma_star_schedule(double m) {
  if (!(m > 0.0)) throw DomainError("gamma_star_schedule: m must be > 0");
  if (m == 1.0) throw DomainError("gamma_star_schedule: m = 1 is degenerate (both sides agree at 0 only)");
  // Work in z = (m-1)x: nonzero root of exp(z) - 1 - m z.
  auto h = [m](double z) { return std::expm1(z) - m * z; };
  const double zmin = std::log(m);
  double z = 0.0;
  if (m > 1.0) {
    double hi = std::max(2.0 * zmin, 1.0);
    while (h(hi) <= 0.0) hi *= 2.0;
    z = numeric::bisect(h, zmin, hi, 0.0, 400);
  } else {
    double lo = std::min(2.0 * zmin, -1.0);
    while (h(lo) <= 0.0) lo *= 2.0;
    z = numeric::bisect(h, lo, zmin, 0.0, 400);
  }
  return z / (m - 1.0);
}

double scheduled_gamma(double eta, double W, double B, double fraction) {
  const double m = (W / B) / eta;
  const double g = std::fabs(m - 1.0) < 1e-9 ? 2.0 : gamma_star_schedule(m);
  return fraction * g * W / (B * B);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "converged";
    case Verdict::Oscillating:
      return "oscillating";
    case Verdict::Diverged:
      return "diverged";
  }
  return "?";
}

Verdict classify(const std::vector<double>& traj, double eta_star, bool projected) {
  if (projected) return Verdict::Diverged;
  const std::size_t n = traj.size();
  if (n >= 100) {
    bool close = true;
    for (std::size_t i = n - 100; i < n; ++i) close = close && std::fabs(traj[i] - eta_star) <= 1e-8;
    if (close) return Verdict::Converged;
  }
  if (n >= 1000) {
    bool growing = true;
    for (std::size_t i = n - 999; i < n; ++i) {
      growing = growing && std::fabs(traj[i] - eta_star) > std::fabs(traj[i - 1] - eta_star);
    }
    if (growing) return Verdict::Diverged;
  }
  return Verdict::Oscillating;
}

StabilityReport simulate_recursion(double eta0, const std::function<double(double)>& gamma, double W, double B,
                                   std::size_t steps) {
  if (!(eta0 > 0.0)) throw DomainError("simulate_recursion: eta0 must be > 0");
  StabilityReport r;
  r.eta_star = W / B;
  r.gamma_star = poisson_threshold(W, B);
  r.trajectory.reserve(steps + 1);
  double eta = eta0;
  r.trajectory.push_back(eta);
  for (std::size_t k = 0; k < steps; ++k) {
    eta = std::max(0.0, eta + gamma(eta) * (W / eta - B));
    r.trajectory.push_back(eta);
    if (eta == 0.0) {
      r.projected = true;
      break;
    }
  }
  r.verdict = classify(r.trajectory, r.eta_star, r.projected);
  return r;
}

StabilityReport simulate_recursion(double eta0, double gamma, double W, double B, std::size_t steps) {
  return simulate_recursion(eta0, [gamma](double) { return gamma; }, W, B, steps);
}

}  // namespace ttlopt
