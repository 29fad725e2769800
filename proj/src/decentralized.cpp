#include "ttlopt/decentralized.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

#include "ttlopt/error.hpp"
#include "ttlopt/numeric.hpp"
#include "ttlopt/utility.hpp"

namespace ttlopt {

namespace {
constexpr double kHitFloor = 1e-9;
}

double dual_step(double eta, double B_curr, double B, double gamma) {
  return std::max(0.0, eta + gamma * (B_curr - B));
}

double timer_from_eta(const Content& c, double beta, double eta, Mode mode) {
  if (!(eta > 0.0)) return kInfiniteTimer;
  return y_inverse_point(c, beta, eta, mode).t;
}

PenaltySpec PenaltySpec::power(double m) {
  if (!(m >= 1.0)) throw InvalidInstance(fmt::format("power penalty needs m >= 1, got {}", m));
  return {Form::Power, m};
}

double penalty(const PenaltySpec& p, double x, double B) {
  if (x <= 0.0) return 0.0;
  if (p.form == PenaltySpec::Form::Power) return std::pow(x, p.m);
  return std::max(0.0, x - B * std::log(B + x));
}

double penalty_prime(const PenaltySpec& p, double x, double B) {
  if (x <= 0.0) return 0.0;
  if (p.form == PenaltySpec::Form::Power) return p.m * std::pow(x, p.m - 1.0);
  if (x - B * std::log(B + x) <= 0.0) return 0.0;
  return 1.0 - B / (B + x);
}

double primal_gradient(const Content& c, double beta, Mode mode, double t, double price) {
  const double mu = c.model.mean_rate();
  const double h = std::max(kHitFloor, is_infinite_timer(t) ? 1.0 : c.model.cdf(t));
  const double gp = is_infinite_timer(t) ? mu / c.model.hazard_at_infinity() : mu / c.model.hazard(t);
  if (mode == Mode::HRB) return utility_prime({beta, c.w}, mu * h) - gp / mu * price;
  return utility_prime({beta, c.w}, h) - gp * price;
}

double primal_delta(const Content& c, Mode mode, double t, double rho) {
  if (is_infinite_timer(t)) return 0.0;
  const double f = c.model.density(t);
  return mode == Mode::HRB ? rho * c.model.mean_rate() * f : rho * f;
}

double penalized_budget(const Catalog& catalog, Mode mode, const PenaltySpec& p) {
  const double n = static_cast<double>(catalog.n());
  auto phi = [&](double b) {
    Catalog c = catalog;
    c.B = b;
    return solve_cum(c, mode).eta - penalty_prime(p, b - catalog.B, catalog.B);
  };
  const double hi = n * (1.0 - 1e-9);
  if (phi(hi) > 0.0) return n;
  return numeric::bisect(phi, catalog.B, hi, 1e-10 * n, 200);
}

std::vector<double> initial_timers(const Catalog& catalog) {
  std::vector<double> t;
  t.reserve(catalog.n());
  const double x = std::min(1.0, catalog.B / static_cast<double>(catalog.n()));
  for (const auto& c : catalog.contents) t.push_back(c.model.quantile(x));
  return t;
}

DualController::DualController(const Catalog& catalog, Mode mode, double gamma, double eta0)
    : catalog_(&catalog), mode_(mode) {
  if (!(gamma > 0.0)) throw InvalidInstance("dual step size must be > 0");
  state_.eta = std::max(0.0, eta0);
  state_.gamma = gamma;
}

double DualController::timer_for(std::size_t content, double) { return current_timer(content); }

void DualController::observe(std::size_t, double, double occupancy) {
  state_.eta = dual_step(state_.eta, occupancy, catalog_->B, state_.gamma);
  ++state_.iterations;
}

double DualController::current_timer(std::size_t content) const {
  return timer_from_eta(catalog_->contents[content], catalog_->beta, state_.eta, mode_);
}

PrimalController::PrimalController(const Catalog& catalog, Mode mode, PenaltySpec penalty, double rho)
    : catalog_(&catalog), mode_(mode), penalty_(penalty) {
  if (!(rho > 0.0)) throw InvalidInstance("primal step size must be > 0");
  state_.rho = rho;
  state_.timers = initial_timers(catalog);
}

double PrimalController::timer_for(std::size_t content, double) { return state_.timers[content]; }

void PrimalController::observe(std::size_t content, double, double occupancy) { primal_step(content, occupancy); }

double PrimalController::primal_step(std::size_t content, double B_curr) {
  const Content& c = catalog_->contents[content];
  double& t = state_.timers[content];
  const double price = penalty_prime(penalty_, B_curr - catalog_->B, catalog_->B);
  const double step = primal_delta(c, mode_, t, state_.rho) * primal_gradient(c, catalog_->beta, mode_, t, price);
  if (!is_infinite_timer(t)) t = std::max(0.0, t + step);
  ++state_.iterations;
  return t;
}

PrimalDualController::PrimalDualController(const Catalog& catalog, Mode mode, double gamma, double rho,
                                           double eta0)
    : catalog_(&catalog), mode_(mode) {
  if (!(gamma > 0.0) || !(rho > 0.0)) throw InvalidInstance("primal-dual step sizes must be > 0");
  state_.eta = std::max(0.0, eta0);
  state_.gamma = gamma;
  state_.rho = rho;
  state_.timers = initial_timers(catalog);
}

double PrimalDualController::timer_for(std::size_t content, double) { return state_.timers[content]; }

void PrimalDualController::observe(std::size_t content, double, double occupancy) {
  primal_dual_step(content, occupancy);
}

std::pair<double, double> PrimalDualController::primal_dual_step(std::size_t content, double B_curr) {
  const Content& c = catalog_->contents[content];
  double& t = state_.timers[content];
  const double step =
      primal_delta(c, mode_, t, state_.rho) * primal_gradient(c, catalog_->beta, mode_, t, state_.eta);
  if (!is_infinite_timer(t)) t = std::max(0.0, t + step);
  state_.eta = dual_step(state_.eta, B_curr, catalog_->B, state_.gamma);
  ++state_.iterations;
  return {t, state_.eta};
}

}  // namespace ttlopt
