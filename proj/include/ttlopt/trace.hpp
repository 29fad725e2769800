#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ttlopt/cache_sim.hpp"
#include "ttlopt/catalog.hpp"

namespace ttlopt {

/// Ordered request records. Ids are 0-based internally and 1-based in files.
struct Trace {
  std::vector<Event> records;
  std::size_t n = 0;

  [[nodiscard]] std::size_t size() const { return records.size(); }
  [[nodiscard]] double duration() const;
  /// Empirical rate of each content over the whole trace.
  [[nodiscard]] std::vector<double> rates() const;
  [[nodiscard]] std::vector<std::uint64_t> counts() const;
};

enum class TraceFormat { Auto, Csv, OrderOnly };

/// Reads `time,content_id` lines (Csv) or `content_id` lines (OrderOnly,
/// times 1, 2, 3, ...). A non-numeric first line is taken as a header.
Trace parse_trace(const std::string& path, TraceFormat format = TraceFormat::Auto);
void write_trace(const Trace& trace, const std::string& path);

/// First `total` requests of the merged per-content streams of a catalog.
Trace synth_trace(const Catalog& catalog, std::uint64_t seed, std::size_t total);

/// Hits per consecutive window of `window` requests. The last, possibly
/// shorter window is kept; a window longer than the sequence gives one window.
std::vector<std::uint64_t> window_hit_counts(const std::vector<std::uint8_t>& hits, std::size_t window);

/// |a - b| / max(b, 1) per window.
std::vector<double> windowed_relative_error(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

struct WeightScheme {
  enum class Kind { RateProportional, RateInverse, UniformRandom };
  Kind kind = Kind::RateProportional;
  std::uint64_t seed = 0;

  [[nodiscard]] std::vector<double> weights(const std::vector<double>& rates) const;
  [[nodiscard]] std::string name() const;
};

struct PolicyUtility {
  std::string policy;
  double aggregate_utility = 0.0;
  double normalized = 0.0;
  std::size_t floored = 0;  // contents whose hit rate was raised to the floor
};

inline constexpr double kUtilityFloor = 1e-9;

/// Sum of w_i U(lambda_i) with zero hit rates floored at kUtilityFloor.
double aggregate_utility(const std::vector<double>& hit_rates, const std::vector<double>& weights, double beta,
                         std::size_t* floored = nullptr);

/// Baseline-relative score: U_P/U_L for positive utilities, U_L/U_P when
/// both are negative, so that values above 1 always mean "better than the
/// baseline".
double normalized_utility(double u_policy, double u_baseline);

/// One entry per policy; `baseline` indexes the normalizing policy.
std::vector<PolicyUtility> weighted_utility_report(const std::vector<std::string>& policies,
                                                   const std::vector<std::vector<double>>& hit_rates,
                                                   std::size_t baseline, const std::vector<double>& weights,
                                                   double beta);

}  // namespace ttlopt
