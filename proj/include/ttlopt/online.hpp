#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ttlopt/catalog.hpp"
#include "ttlopt/controller.hpp"

namespace ttlopt {

/// One inter-request observation t - tau from the installed timer t and the
/// remaining lifetime tau. Returns nullopt when no time has elapsed.
std::optional<double> estimate_rate(double t, double tau);

enum class Estimator { Raw, Ewma };

/// Running estimate of the mean inter-request time of one content.
class RateEstimate {
 public:
  explicit RateEstimate(Estimator kind = Estimator::Ewma, double weight = 0.1) : kind_(kind), weight_(weight) {}

  void observe(double x);
  [[nodiscard]] bool ready() const { return count_ > 0; }
  [[nodiscard]] double mean_irt() const { return xhat_; }
  [[nodiscard]] double rate() const { return 1.0 / xhat_; }
  [[nodiscard]] std::size_t count() const { return count_; }

 private:
  Estimator kind_;
  double weight_;
  double xhat_ = 0.0;
  std::size_t count_ = 0;
};

/// Timer of the Poisson dual for rate mu, weight w, fairness beta and price
/// eta. kInfiniteTimer when eta = 0 or the target hit rate reaches mu.
double poisson_timer(double mu, double w, double beta, double eta);

/// Dual controller that always uses the Poisson timer formula. With
/// `oracle_rates` it uses the catalog's exact mean rates, otherwise it
/// estimates them from observed inter-request times.
class OnlinePoissonController : public TimerController {
 public:
  struct Options {
    double gamma = 1e-5;
    double eta0 = 1.0;
    Estimator estimator = Estimator::Ewma;
    double ewma_weight = 0.1;
    bool oracle_rates = false;
  };

  OnlinePoissonController(const Catalog& catalog, Options options);

  double timer_for(std::size_t content, double now) override;
  void observe(std::size_t content, double now, double occupancy) override;
  [[nodiscard]] double current_timer(std::size_t content) const override;
  [[nodiscard]] double eta() const override { return eta_; }

  [[nodiscard]] const RateEstimate& estimate(std::size_t content) const { return est_[content]; }

  /// Explicit step: updates eta from the occupancy and returns (timer, eta)
  /// for `content` under the updated price.
  std::pair<double, double> online_poisson_step(std::size_t content, double B_curr);

 private:
  const Catalog* catalog_;
  Options opt_;
  double eta_;
  std::vector<RateEstimate> est_;
  std::vector<double> last_;
};

/// Every content gets the same timer 1/eta; eta follows the dual update.
class LruDualController : public TimerController {
 public:
  LruDualController(double B, double gamma, double eta0);

  double timer_for(std::size_t, double) override { return uniform_timer(); }
  void observe(std::size_t content, double now, double occupancy) override;
  [[nodiscard]] double current_timer(std::size_t) const override { return uniform_timer(); }
  [[nodiscard]] double eta() const override { return eta_; }

  [[nodiscard]] double uniform_timer() const;
  /// One step: updates eta and returns the new common timer.
  double lru_dual_step(double B_curr);

 private:
  double B_;
  double gamma_;
  double eta_;
};

}  // namespace ttlopt
