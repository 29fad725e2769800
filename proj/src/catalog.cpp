#include "ttlopt/catalog.hpp"

#include <fmt/core.h>

#include <cmath>

#include "ttlopt/error.hpp"

namespace ttlopt {

std::vector<double> Catalog::rates() const {
  std::vector<double> out;
  out.reserve(contents.size());
  for (const auto& c : contents) out.push_back(c.model.mean_rate());
  return out;
}

std::vector<double> Catalog::weights() const {
  std::vector<double> out;
  out.reserve(contents.size());
  for (const auto& c : contents) out.push_back(c.w);
  return out;
}

double weight_for(WeightRule rule, double mu) {
  switch (rule) {
    case WeightRule::Unit:
      return 1.0;
    case WeightRule::Rate:
      return mu;
    case WeightRule::InverseRate:
      return 1.0 / mu;
  }
  return 1.0;
}

Catalog zipf_exponential_catalog(std::size_t n, double alpha, double total_rate, double B, double beta,
                                 WeightRule weights) {
  const PopularityModel pop = zipf_popularity(n, alpha);
  Catalog c;
  c.beta = beta;
  c.B = B;
  c.contents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = total_rate * pop.probabilities[i];
    c.contents.push_back({IrtModel::exponential(mu), weight_for(weights, mu), i});
  }
  return c;
}

Catalog zipf_pareto_catalog(std::size_t n, double alpha, double total_rate, double k, double B, double beta,
                            WeightRule weights) {
  const PopularityModel pop = zipf_popularity(n, alpha);
  Catalog c;
  c.beta = beta;
  c.B = B;
  c.contents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = total_rate * pop.probabilities[i];
    c.contents.push_back({IrtModel::pareto(k, (1.0 - k) / mu), weight_for(weights, mu), i});
  }
  return c;
}

void validate(const Catalog& catalog) {
  if (catalog.contents.empty()) throw InvalidInstance("catalog has no contents");
  if (!(catalog.B > 0.0) || !std::isfinite(catalog.B)) {
    throw InvalidInstance(fmt::format("budget must be positive and finite, got {}", catalog.B));
  }
  if (!(catalog.beta >= 0.0)) throw InvalidInstance(fmt::format("beta must be >= 0, got {}", catalog.beta));
  for (const auto& c : catalog.contents) {
    if (!(c.w > 0.0) || !std::isfinite(c.w)) {
      throw InvalidInstance(fmt::format("content {} has non-positive weight {}", c.id, c.w));
    }
  }
}

}  // namespace ttlopt
