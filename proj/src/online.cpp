#include "ttlopt/online.hpp"

#include <fmt/core.h>

#include <cmath>
#include <limits>

#include "ttlopt/decentralized.hpp"
#include "ttlopt/error.hpp"
#include "ttlopt/utility.hpp"

namespace ttlopt {

std::optional<double> estimate_rate(double t, double tau) {
  if (!(tau >= 0.0 && tau <= t)) throw DomainError(fmt::format("estimate_rate: need 0 <= tau <= t, got t = {}, tau = {}", t, tau));
  const double x = t - tau;
  if (!(x > 0.0)) return std::nullopt;
  return x;
}

void RateEstimate::observe(double x) {
  if (!(x > 0.0)) return;
  if (count_ == 0 || kind_ == Estimator::Raw) {
    xhat_ = x;
  } else {
    xhat_ += weight_ * (x - xhat_);
  }
  ++count_;
}

double poisson_timer(double mu, double w, double beta, double eta) {
  if (!(eta > 0.0)) return kInfiniteTimer;
  const double lambda = utility_prime_inv({beta, w}, eta / mu);
  const double arg = 1.0 - lambda / mu;
  if (arg <= 0.0) return kInfiniteTimer;
  return -std::log(arg) / mu;
}

OnlinePoissonController::OnlinePoissonController(const Catalog& catalog, Options options)
    : catalog_(&catalog),
      opt_(options),
      eta_(std::max(0.0, options.eta0)),
      est_(catalog.n(), RateEstimate(options.estimator, options.ewma_weight)),
      last_(catalog.n(), std::numeric_limits<double>::quiet_NaN()) {
  if (!(opt_.gamma > 0.0)) throw InvalidInstance("online step size must be > 0");
  if (!(catalog.beta > 0.0)) throw InvalidInstance("online controller requires beta > 0");
}

double OnlinePoissonController::timer_for(std::size_t content, double now) {
  if (!std::isnan(last_[content])) est_[content].observe(now - last_[content]);
  last_[content] = now;
  return current_timer(content);
}

double OnlinePoissonController::current_timer(std::size_t content) const {
  const Content& c = catalog_->contents[content];
  double mu = 0.0;
  if (opt_.oracle_rates) {
    mu = c.model.mean_rate();
  } else {
    if (!est_[content].ready()) return 0.0;
    mu = est_[content].rate();
  }
  return poisson_timer(mu, c.w, catalog_->beta, eta_);
}

void OnlinePoissonController::observe(std::size_t, double, double occupancy) {
  eta_ = dual_step(eta_, occupancy, catalog_->B, opt_.gamma);
}

std::pair<double, double> OnlinePoissonController::online_poisson_step(std::size_t content, double B_curr) {
  eta_ = dual_step(eta_, B_curr, catalog_->B, opt_.gamma);
  return {current_timer(content), eta_};
}

LruDualController::LruDualController(double B, double gamma, double eta0) : B_(B), gamma_(gamma), eta_(eta0) {
  if (!(gamma > 0.0)) throw InvalidInstance("LRU dual step size must be > 0");
}

double LruDualController::uniform_timer() const { return eta_ > 0.0 ? 1.0 / eta_ : kInfiniteTimer; }

void LruDualController::observe(std::size_t, double, double occupancy) { lru_dual_step(occupancy); }

double LruDualController::lru_dual_step(double B_curr) {
  eta_ = dual_step(eta_, B_curr, B_, gamma_);
  return uniform_timer();
}

}  // namespace ttlopt
