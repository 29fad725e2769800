#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ttlopt/catalog.hpp"

namespace ttlopt {

/// HRB: utilities of hit rates. HPB: utilities of hit probabilities.
enum class Mode { HRB, HPB };

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& s);

struct YInversePoint {
  double h;        // hit probability
  double t;        // timer, kInfiniteTimer when clamped at h = 1
  bool clamped;
};

/// Hit probability whose marginal utility per unit occupancy equals eta.
YInversePoint y_inverse_point(const Content& c, double beta, double eta, Mode mode);
double y_inverse(const Content& c, double beta, double eta, Mode mode);

/// Marginal utility per unit occupancy at hit probability h (the inverse of
/// y_inverse on unclamped contents).
double marginal_per_occupancy(const Content& c, double beta, double h, Mode mode);

struct ContentSolution {
  std::size_t id = 0;
  double timer = 0.0;
  double hit_prob = 0.0;
  double hit_rate = 0.0;
  double occupancy = 0.0;
  bool clamped = false;
};

struct CumSolution {
  double eta = 0.0;
  Mode mode = Mode::HRB;
  double beta = 1.0;
  double B = 0.0;
  bool degenerate = false;  // B >= n: everything pinned, eta = 0
  bool fell_back = false;   // closed form needed clamping, solved numerically
  std::vector<ContentSolution> contents;

  [[nodiscard]] double total_occupancy() const;
  [[nodiscard]] double aggregate_hit_rate() const;
  [[nodiscard]] std::vector<double> hit_probs() const;
  [[nodiscard]] std::vector<double> hit_rates() const;
};

CumSolution solve_cum(const Catalog& catalog, Mode mode);

/// Closed-form optimum for all-exponential catalogs, beta > 0, beta != 1.
/// Falls back to solve_cum (and sets fell_back) if any h would exceed 1.
CumSolution poisson_closed_form(const Catalog& catalog, Mode mode);

/// Closed-form hit probabilities without the h <= 1 constraint.
std::vector<double> poisson_closed_form_probs(const Catalog& catalog, Mode mode);

/// Index (1-based) where HRB and HPB hit rates swap order on a Zipf(alpha)
/// catalog with the given weights.
std::size_t crossover_index(const std::vector<double>& weights, double alpha, double beta);

/// Sum of weighted utilities of the given hit probabilities.
double objective(const Catalog& catalog, Mode mode, const std::vector<double>& h);

}  // namespace ttlopt
