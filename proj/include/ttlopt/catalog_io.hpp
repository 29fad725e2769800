#pragma once

#include <string>

#include <json.hpp>

#include "ttlopt/catalog.hpp"

namespace ttlopt {

/// Builds a catalog from its JSON description. Either an explicit
///   {"beta": 2, "budget": 100, "contents": [{"model": {...}, "w": 1}, ...]}
/// or a generator block
///   {"beta": 2, "budget": 100, "generator": {"n": 1000, "alpha": 0.8,
///    "total_rate": 1, "model": {"type": "exponential"}, "weights": "rate"}}.
Catalog catalog_from_json(const nlohmann::json& j);
Catalog load_catalog(const std::string& path);

IrtModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const IrtModel& m);
nlohmann::json catalog_to_json(const Catalog& c);

WeightRule parse_weight_rule(const std::string& s);

/// Zipf catalog of 2-MMPP contents: phase-1 rates Zipf(alpha1) and phase-2
/// rates Zipf(alpha2), each scaled to `total_rate`, switching rates a12 x and
/// a21 x.
Catalog zipf_mmpp_catalog(std::size_t n, double alpha1, double alpha2, double total_rate, double a12, double a21,
                          double x, double B, double beta, WeightRule weights);

}  // namespace ttlopt
