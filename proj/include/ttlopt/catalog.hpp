#pragma once

#include <cstddef>
#include <vector>

#include "ttlopt/workload.hpp"

namespace ttlopt {

struct Content {
  IrtModel model;
  double w = 1.0;
  std::size_t id = 0;
};

/// A full problem instance: contents, shared fairness beta, budget B.
struct Catalog {
  std::vector<Content> contents;
  double beta = 1.0;
  double B = 1.0;

  [[nodiscard]] std::size_t n() const { return contents.size(); }
  [[nodiscard]] std::vector<double> rates() const;
  [[nodiscard]] std::vector<double> weights() const;
};

enum class WeightRule { Unit, Rate, InverseRate };

/// n contents with exponential irts whose rates follow Zipf(alpha) scaled to
/// `total_rate`.
Catalog zipf_exponential_catalog(std::size_t n, double alpha, double total_rate, double B, double beta,
                                 WeightRule weights);

/// Same popularity, generalized Pareto irts with shape k and matching means.
Catalog zipf_pareto_catalog(std::size_t n, double alpha, double total_rate, double k, double B, double beta,
                            WeightRule weights);

/// Throws InvalidInstance when the catalog violates its invariants (empty,
/// non-positive weights, B outside (0, inf)).
void validate(const Catalog& catalog);

double weight_for(WeightRule rule, double mu);

}  // namespace ttlopt
