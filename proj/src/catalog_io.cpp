#include "ttlopt/catalog_io.hpp"

#include <fmt/core.h>

#include <fstream>
#include <variant>

#include "ttlopt/error.hpp"

namespace ttlopt {

using nlohmann::json;

namespace {

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InvalidInstance(fmt::format("catalog: missing numeric field '{}'", key));
  }
  return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j, key) : fallback;
}

}  // namespace

WeightRule parse_weight_rule(const std::string& s) {
  if (s == "unit" || s == "1") return WeightRule::Unit;
  if (s == "rate" || s == "mu") return WeightRule::Rate;
  if (s == "inverse" || s == "1/mu") return WeightRule::InverseRate;
  throw InvalidInstance(fmt::format("unknown weight rule '{}' (unit, rate, inverse)", s));
}

IrtModel model_from_json(const json& j) {
  const std::string type = j.value("type", "");
  if (type == "exponential") return IrtModel::exponential(num(j, "mu"));
  if (type == "pareto") return IrtModel::pareto(num(j, "k"), num(j, "sigma"), num_or(j, "location", 0.0));
  if (type == "hyperexponential") {
    return IrtModel::hyperexponential(j.at("p").get<std::vector<double>>(), j.at("theta").get<std::vector<double>>());
  }
  if (type == "weibull") return IrtModel::weibull(num(j, "k"), num(j, "theta"));
  if (type == "uniform") return IrtModel::uniform(num(j, "b"));
  if (type == "mmpp2") return IrtModel::mmpp2(num(j, "theta1"), num(j, "theta2"), num(j, "r12"), num(j, "r21"));
  throw InvalidInstance(fmt::format("catalog: unknown model type '{}'", type));
}

json model_to_json(const IrtModel& m) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return {{"type", "exponential"}, {"mu", v.mu}};
        } else if constexpr (std::is_same_v<T, GeneralizedPareto>) {
          return {{"type", "pareto"}, {"k", v.k}, {"sigma", v.sigma}};
        } else if constexpr (std::is_same_v<T, Hyperexponential>) {
          return {{"type", "hyperexponential"}, {"p", v.p}, {"theta", v.theta}};
        } else if constexpr (std::is_same_v<T, Weibull>) {
          return {{"type", "weibull"}, {"k", v.k}, {"theta", v.theta}};
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return {{"type", "uniform"}, {"b", v.b}};
        } else {
          return {{"type", "mmpp2"}, {"theta1", v.theta1}, {"theta2", v.theta2}, {"r12", v.r12}, {"r21", v.r21}};
        }
      },
      m.variant());
}

json catalog_to_json(const Catalog& c) {
  json out = {{"beta", c.beta}, {"budget", c.B}, {"contents", json::array()}};
  for (const auto& content : c.contents) {
    out["contents"].push_back({{"model", model_to_json(content.model)}, {"w", content.w}});
  }
  return out;
}

Catalog zipf_mmpp_catalog(std::size_t n, double alpha1, double alpha2, double total_rate, double a12, double a21,
                          double x, double B, double beta, WeightRule weights) {
  const PopularityModel p1 = zipf_popularity(n, alpha1);
  const PopularityModel p2 = zipf_popularity(n, alpha2);
  Catalog c;
  c.beta = beta;
  c.B = B;
  c.contents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    IrtModel m = IrtModel::mmpp2(total_rate * p1.probabilities[i], total_rate * p2.probabilities[i], a12 * x, a21 * x);
    const double mu = m.mean_rate();
    c.contents.push_back({std::move(m), weight_for(weights, mu), i});
  }
  return c;
}

Catalog catalog_from_json(const json& j) {
  const double beta = num(j, "beta");
  const double B = num(j, "budget");
  Catalog c;
  if (j.contains("generator")) {
    const json& g = j.at("generator");
    const auto n = static_cast<std::size_t>(num(g, "n"));
    const double alpha = num_or(g, "alpha", 0.8);
    const double total = num_or(g, "total_rate", 1.0);
    const WeightRule w = parse_weight_rule(g.value("weights", "unit"));
    const json model = g.value("model", json{{"type", "exponential"}});
    const std::string type = model.value("type", "exponential");
    if (type == "exponential") {
      c = zipf_exponential_catalog(n, alpha, total, B, beta, w);
    } else if (type == "pareto") {
      c = zipf_pareto_catalog(n, alpha, total, num(model, "k"), B, beta, w);
    } else if (type == "mmpp2") {
      c = zipf_mmpp_catalog(n, num(model, "alpha1"), num(model, "alpha2"), total, num(model, "a12"),
                            num(model, "a21"), num(model, "x"), B, beta, w);
    } else {
      throw InvalidInstance(fmt::format("catalog generator: unsupported model type '{}'", type));
    }
  } else if (j.contains("contents")) {
    c.beta = beta;
    c.B = B;
    std::size_t id = 0;
    for (const auto& item : j.at("contents")) {
      c.contents.push_back({model_from_json(item.at("model")), item.value("w", 1.0), id++});
    }
  } else {
    throw InvalidInstance("catalog needs either 'contents' or 'generator'");
  }
  validate(c);
  return c;
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInstance(fmt::format("cannot open catalog file '{}'", path));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInstance(fmt::format("catalog file '{}' is not valid JSON: {}", path, e.what()));
  }
  return catalog_from_json(j);
}

}  // namespace ttlopt
