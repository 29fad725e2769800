#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "ttlopt/rng.hpp"

namespace ttlopt {

/// Timer value meaning "never expires". Returned by quantiles at u >= 1 and
/// by controllers that pin a content.
inline constexpr double kInfiniteTimer = std::numeric_limits<double>::infinity();

inline bool is_infinite_timer(double t) { return t == kInfiniteTimer; }

struct PopularityModel {
  std::size_t n = 0;
  double alpha = 0.0;
  std::vector<double> probabilities;
};

/// p_i proportional to i^-alpha, i = 1..n.
PopularityModel zipf_popularity(std::size_t n, double alpha);

struct Exponential {
  double mu;
};

/// Location is fixed at zero; a nonzero location is rejected.
struct GeneralizedPareto {
  double k;
  double sigma;
};

struct Hyperexponential {
  std::vector<double> p;
  std::vector<double> theta;
};

struct Weibull {
  double k;
  double theta;
};

struct Uniform {
  double b;
};

/// Two-state Markov-modulated Poisson process. theta1/theta2 are the arrival
/// rates in each state, r12/r21 the switching rates.
struct Mmpp2 {
  double theta1;
  double theta2;
  double r12;
  double r21;
};

struct H2Params {
  double q1;
  double q2;
  double u1;
  double u2;
  double delta;
};

/// Hyperexponential parameters of the inter-request time of a 2-MMPP whose
/// initial state is drawn from the arrival-stationary distribution.
H2Params mmpp2_to_h2(double theta1, double theta2, double r12, double r21);

struct IrtPoint {
  double F;
  double f;
  double age;
  double hazard;
};

struct OccupancyPoint {
  double g;
  double g_prime;
};

/// Inter-request time distribution of one content.
///
/// All functions are pure. `g_prime` is the derivative of the occupancy map
/// with respect to hit probability, g'(x) = mu / hazard(F^-1(x)).
class IrtModel {
 public:
  using Variant = std::variant<Exponential, GeneralizedPareto, Hyperexponential,
                               Weibull, Uniform, Mmpp2>;

  static IrtModel exponential(double mu);
  static IrtModel pareto(double k, double sigma, double location = 0.0);
  static IrtModel hyperexponential(std::vector<double> p,
                                   std::vector<double> theta);
  static IrtModel weibull(double k, double theta);
  static IrtModel uniform(double b);
  static IrtModel mmpp2(double theta1, double theta2, double r12, double r21);

  [[nodiscard]] const Variant& variant() const { return v_; }
  [[nodiscard]] std::string name() const;

  [[nodiscard]] bool is_exponential() const;
  [[nodiscard]] double mean_rate() const { return mu_; }

  [[nodiscard]] double cdf(double t) const;
  [[nodiscard]] double survival(double t) const;
  [[nodiscard]] double density(double t) const;
  [[nodiscard]] double age(double t) const;
  [[nodiscard]] double hazard(double t) const;
  /// Limit of the hazard as t -> infinity (0 when it vanishes).
  [[nodiscard]] double hazard_at_infinity() const;

  /// Inverse CDF. Returns kInfiniteTimer for u >= 1.
  [[nodiscard]] double quantile(double u) const;

  [[nodiscard]] double g(double x) const;
  [[nodiscard]] double g_prime(double x) const;

  [[nodiscard]] bool is_dhr() const;

  /// Draws one inter-request time. For Mmpp2 use ArrivalSampler instead, the
  /// draws are not independent.
  [[nodiscard]] double sample_irt(Rng& rng) const;

  /// The hyperexponential equivalent of an Mmpp2 model.
  [[nodiscard]] const Hyperexponential* h2() const;

 private:
  explicit IrtModel(Variant v);

  Variant v_;
  Hyperexponential h2_;  // filled for Mmpp2
  double mu_ = 0.0;
  double theta_min_ = 0.0;  // hyperexponential slowest phase
};

IrtPoint irt_eval(const IrtModel& model, double t);
double irt_quantile(const IrtModel& model, double u);
double mean_rate(const IrtModel& model);
OccupancyPoint occupancy_map(const IrtModel& model, double x);
bool is_dhr(const IrtModel& model);

/// Lazily generates the arrival times of one content. Renewal variants start
/// from a renewal at time 0; Mmpp2 starts in a state drawn from the
/// arrival-stationary distribution.
class ArrivalSampler {
 public:
  ArrivalSampler(const IrtModel& model, Rng rng);
  double next();
  [[nodiscard]] double last() const { return now_; }

 private:
  double next_mmpp();

  const IrtModel* model_;
  Rng rng_;
  double now_ = 0.0;
  int state_ = 0;
};

struct RequestStream {
  std::size_t content_id = 0;
  std::vector<double> times;
  std::uint64_t seed = 0;
};

RequestStream sample_stream(const IrtModel& model, std::uint64_t seed,
                            double horizon, std::size_t content_id = 0);

}  // namespace ttlopt
