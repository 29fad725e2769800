#pragma once

#include <cstddef>
#include <vector>

#include "ttlopt/catalog.hpp"
#include "ttlopt/controller.hpp"
#include "ttlopt/solver.hpp"

namespace ttlopt {

/// Projected dual update, max{0, eta + gamma (B_curr - B)}.
double dual_step(double eta, double B_curr, double B, double gamma);

/// Timer realizing the hit probability y_inverse(eta). Returns kInfiniteTimer
/// when eta = 0 or the content is clamped at h = 1.
double timer_from_eta(const Content& c, double beta, double eta, Mode mode);

struct PenaltySpec {
  enum class Form { BLog, Power };
  Form form = Form::BLog;
  double m = 2.0;  // Power exponent, m >= 1

  static PenaltySpec blog() { return {Form::BLog, 0.0}; }
  static PenaltySpec power(double m);
};

/// Penalty on the occupancy excess x = occupancy - B.
double penalty(const PenaltySpec& p, double x, double B);
double penalty_prime(const PenaltySpec& p, double x, double B);

/// Gradient of the utility minus (penalty or price) with respect to timer
/// direction, before the step-size factor. `price` is C'(x) or eta.
double primal_gradient(const Content& c, double beta, Mode mode, double t, double price);

/// Step-size factor delta = rho mu f(t) (HRB) or rho f(t) (HPB).
double primal_delta(const Content& c, Mode mode, double t, double rho);

/// Stationary point of the penalized objective: the CUM optimum at the budget
/// B' where the optimal price equals C'(B' - B). Returns B'.
double penalized_budget(const Catalog& catalog, Mode mode, const PenaltySpec& p);

struct ControllerState {
  double eta = 0.0;
  std::vector<double> timers;
  double gamma = 0.0;
  double rho = 0.0;
  std::size_t iterations = 0;
};

class DualController : public TimerController {
 public:
  DualController(const Catalog& catalog, Mode mode, double gamma, double eta0);

  double timer_for(std::size_t content, double now) override;
  void observe(std::size_t content, double now, double occupancy) override;
  [[nodiscard]] double current_timer(std::size_t content) const override;
  [[nodiscard]] double eta() const override { return state_.eta; }
  [[nodiscard]] const ControllerState& state() const { return state_; }

 private:
  const Catalog* catalog_;
  Mode mode_;
  ControllerState state_;
};

class PrimalController : public TimerController {
 public:
  PrimalController(const Catalog& catalog, Mode mode, PenaltySpec penalty, double rho);

  double timer_for(std::size_t content, double now) override;
  void observe(std::size_t content, double now, double occupancy) override;
  [[nodiscard]] double current_timer(std::size_t content) const override { return state_.timers[content]; }
  [[nodiscard]] const ControllerState& state() const { return state_; }

  /// One update of content's timer given the current occupancy.
  double primal_step(std::size_t content, double B_curr);

 private:
  const Catalog* catalog_;
  Mode mode_;
  PenaltySpec penalty_;
  ControllerState state_;
};

class PrimalDualController : public TimerController {
 public:
  PrimalDualController(const Catalog& catalog, Mode mode, double gamma, double rho, double eta0);

  double timer_for(std::size_t content, double now) override;
  void observe(std::size_t content, double now, double occupancy) override;
  [[nodiscard]] double current_timer(std::size_t content) const override { return state_.timers[content]; }
  [[nodiscard]] double eta() const override { return state_.eta; }
  [[nodiscard]] ControllerState& state() { return state_; }

  /// One joint update; returns the new (timer, eta).
  std::pair<double, double> primal_dual_step(std::size_t content, double B_curr);

 private:
  const Catalog* catalog_;
  Mode mode_;
  ControllerState state_;
};

/// Initial timers F^-1(B/n) used by primal and primal-dual controllers.
std::vector<double> initial_timers(const Catalog& catalog);

}  // namespace ttlopt
