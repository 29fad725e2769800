#include "ttlopt/solver.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <variant>

#include "ttlopt/error.hpp"
#include "ttlopt/numeric.hpp"
#include "ttlopt/utility.hpp"

namespace ttlopt {

std::string mode_name(Mode mode) { return mode == Mode::HRB ? "hrb" : "hpb"; }

Mode parse_mode(const std::string& s) {
  if (s == "hrb" || s == "HRB") return Mode::HRB;
  if (s == "hpb" || s == "HPB") return Mode::HPB;
  throw InvalidInstance(fmt::format("unknown mode '{}' (expected hrb or hpb)", s));
}

namespace {

// Scale factor in front of h^-beta: w mu^(1-beta) for HRB, w for HPB.
double marginal_scale(const Content& c, double beta, Mode mode) {
  const double mu = c.model.mean_rate();
  return mode == Mode::HRB ? c.w * std::pow(mu, 1.0 - beta) : c.w;
}

YInversePoint finish_from_h(const Content& c, double h) {
  if (h >= 1.0) return {1.0, kInfiniteTimer, true};
  return {h, c.model.quantile(h), false};
}

YInversePoint y_inverse_exponential(const Content& c, double beta, double eta, Mode mode) {
  const double h = std::pow(marginal_scale(c, beta, mode) / eta, 1.0 / beta);
  return finish_from_h(c, h);
}

YInversePoint y_inverse_pareto(const Content& c, double k, double beta, double eta, Mode mode) {
  const double C = marginal_scale(c, beta, mode) / (eta * (1.0 - k));
  auto e = [&](double h) { return C * std::pow(1.0 - h, k) - std::pow(h, beta); };
  if (!(e(0.0) > 0.0 && e(1.0) < 0.0)) {
    throw NumericalFailure(fmt::format("Pareto timer equation lacks a sign change (C = {})", C));
  }
  const double h = numeric::bisect(e, 0.0, 1.0, 0.0, 2000);
  return finish_from_h(c, h);
}

// General DHR model: solve log y(t) = log eta in log t, where
// y(t) = scale / mu * F(t)^-beta * hazard(t).
YInversePoint y_inverse_general(const Content& c, double beta, double eta, Mode mode) {
  const IrtModel& m = c.model;
  const double mu = m.mean_rate();
  const double base = std::log(marginal_scale(c, beta, mode)) - std::log(mu) - std::log(eta);
  const double z_inf = m.hazard_at_infinity();
  if (z_inf > 0.0 && base + std::log(z_inf) >= 0.0) return {1.0, kInfiniteTimer, true};

  auto f = [&](double lt) {
    const double t = std::exp(lt);
    return base - beta * std::log(m.cdf(t)) + std::log(m.hazard(t));
  };
  double lo = -std::log(mu);
  double hi = lo;
  while (f(lo) <= 0.0) {
    lo -= 2.0;
    if (lo < -700.0) throw NumericalFailure("y_inverse: lower bracket not found");
  }
  while (f(hi) >= 0.0) {
    hi += 2.0;
    if (hi > 700.0) return {1.0, kInfiniteTimer, true};
  }
  const double lt = numeric::bisect(f, lo, hi, 1e-15, 400);
  const double t = std::exp(lt);
  return {m.cdf(t), t, false};
}

}  // namespace

YInversePoint y_inverse_point(const Content& c, double beta, double eta, Mode mode) {
  if (!(beta > 0.0)) throw InvalidInstance(fmt::format("solver requires beta > 0, got {}", beta));
  if (!(eta > 0.0)) return {1.0, kInfiniteTimer, true};
  if (!c.model.is_dhr()) throw NonConvexInstance(fmt::format("content {} ({}) is not DHR", c.id, c.model.name()));
  if (c.model.is_exponential()) return y_inverse_exponential(c, beta, eta, mode);
  if (const auto* p = std::get_if<GeneralizedPareto>(&c.model.variant())) {
    return y_inverse_pareto(c, p->k, beta, eta, mode);
  }
  return y_inverse_general(c, beta, eta, mode);
}

double y_inverse(const Content& c, double beta, double eta, Mode mode) {
  return y_inverse_point(c, beta, eta, mode).h;
}

double marginal_per_occupancy(const Content& c, double beta, double h, Mode mode) {
  return marginal_scale(c, beta, mode) * std::pow(h, -beta) / c.model.g_prime(h);
}

double CumSolution::total_occupancy() const {
  double s = 0.0;
  for (const auto& c : contents) s += c.occupancy;
  return s;
}

double CumSolution::aggregate_hit_rate() const {
  double s = 0.0;
  for (const auto& c : contents) s += c.hit_rate;
  return s;
}

std::vector<double> CumSolution::hit_probs() const {
  std::vector<double> out;
  out.reserve(contents.size());
  for (const auto& c : contents) out.push_back(c.hit_prob);
  return out;
}

std::vector<double> CumSolution::hit_rates() const {
  std::vector<double> out;
  out.reserve(contents.size());
  for (const auto& c : contents) out.push_back(c.hit_rate);
  return out;
}

namespace {

ContentSolution content_solution(const Content& c, const YInversePoint& y) {
  ContentSolution s;
  s.id = c.id;
  s.hit_prob = y.h;
  s.hit_rate = c.model.mean_rate() * y.h;
  s.timer = y.t;
  s.clamped = y.clamped;
  s.occupancy = y.clamped ? 1.0 : c.model.age(y.t);
  return s;
}

double occupancy_at(const Catalog& cat, double eta, Mode mode) {
  double s = 0.0;
  for (const auto& c : cat.contents) {
    const YInversePoint y = y_inverse_point(c, cat.beta, eta, mode);
    s += y.clamped ? 1.0 : c.model.age(y.t);
  }
  return s;
}

void check_solvable(const Catalog& cat) {
  validate(cat);
  if (!(cat.beta > 0.0)) throw InvalidInstance(fmt::format("solver requires beta > 0, got {}", cat.beta));
  for (const auto& c : cat.contents) {
    if (!c.model.is_dhr()) {
      throw NonConvexInstance(fmt::format("content {} ({}) is not DHR; instance is non-convex", c.id, c.model.name()));
    }
  }
}

}  // namespace

CumSolution solve_cum(const Catalog& catalog, Mode mode) {
  check_solvable(catalog);
  CumSolution sol;
  sol.mode = mode;
  sol.beta = catalog.beta;
  sol.B = catalog.B;
  const auto n = static_cast<double>(catalog.n());
  if (catalog.B >= n) {
    sol.degenerate = true;
    sol.eta = 0.0;
    for (const auto& c : catalog.contents) sol.contents.push_back(content_solution(c, {1.0, kInfiniteTimer, true}));
    return sol;
  }

  const double B = catalog.B;
  double lo = 0.0;  // log eta with occupancy >= B
  double hi = 0.0;  // log eta with occupancy <= B
  double g = occupancy_at(catalog, 1.0, mode);
  if (g >= B) {
    do {
      hi += std::log(10.0);
      if (hi > 700.0) throw NumericalFailure("solve_cum: upper eta bracket not found");
    } while (occupancy_at(catalog, std::exp(hi), mode) > B);
  } else {
    do {
      lo -= std::log(10.0);
      if (lo < -700.0) throw NumericalFailure("solve_cum: lower eta bracket not found");
    } while (occupancy_at(catalog, std::exp(lo), mode) < B);
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    mid = 0.5 * (lo + hi);
    g = occupancy_at(catalog, std::exp(mid), mode);
    if (std::fabs(g - B) < 1e-11 * std::max(1.0, B)) break;
    if (g > B) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-16) break;
  }
  sol.eta = std::exp(mid);
  sol.contents.reserve(catalog.n());
  for (const auto& c : catalog.contents) {
    sol.contents.push_back(content_solution(c, y_inverse_point(c, catalog.beta, sol.eta, mode)));
  }
  return sol;
}

std::vector<double> poisson_closed_form_probs(const Catalog& catalog, Mode mode) {
  check_solvable(catalog);
  for (const auto& c : catalog.contents) {
    if (!c.model.is_exponential()) throw InvalidInstance("poisson_closed_form needs an all-exponential catalog");
  }
  const double beta = catalog.beta;
  if (beta == 1.0) throw DomainError("closed form needs beta != 1");
  std::vector<double> a(catalog.n());
  double total = 0.0;
  for (std::size_t i = 0; i < catalog.n(); ++i) {
    const auto& c = catalog.contents[i];
    const double mu = c.model.mean_rate();
    a[i] = std::pow(c.w, 1.0 / beta) * (mode == Mode::HRB ? std::pow(mu, 1.0 / beta - 1.0) : 1.0);
    total += a[i];
  }
  for (double& x : a) x *= catalog.B / total;
  return a;
}

CumSolution poisson_closed_form(const Catalog& catalog, Mode mode) {
  check_solvable(catalog);
  if (catalog.beta == 1.0 || catalog.B >= static_cast<double>(catalog.n())) return solve_cum(catalog, mode);
  const auto h = poisson_closed_form_probs(catalog, mode);
  CumSolution sol;
  sol.mode = mode;
  sol.beta = catalog.beta;
  sol.B = catalog.B;
  for (std::size_t i = 0; i < catalog.n(); ++i) {
    if (h[i] > 1.0) {
      CumSolution fb = solve_cum(catalog, mode);
      fb.fell_back = true;
      return fb;
    }
    const auto& c = catalog.contents[i];
    sol.contents.push_back(content_solution(c, finish_from_h(c, h[i])));
  }
  const auto& c0 = catalog.contents.front();
  sol.eta = marginal_scale(c0, sol.beta, mode) * std::pow(sol.contents.front().hit_prob, -sol.beta);
  return sol;
}

std::size_t crossover_index(const std::vector<double>& weights, double alpha, double beta) {
  if (weights.empty()) throw InvalidInstance("crossover_index: no weights");
  if (!(beta > 0.0)) throw DomainError("crossover_index: beta must be > 0");
  const double e = alpha * (1.0 - 1.0 / beta);
  if (beta == 1.0 || e == 0.0) throw DomainError("crossover index is undefined when alpha (1 - 1/beta) = 0");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double wb = std::pow(weights[j], 1.0 / beta);
    num += wb * std::pow(static_cast<double>(j + 1), e);
    den += wb;
  }
  const double i0 = std::floor(std::pow(num / den, 1.0 / e));
  return static_cast<std::size_t>(std::max(1.0, i0));
}

double objective(const Catalog& catalog, Mode mode, const std::vector<double>& h) {
  double s = 0.0;
  for (std::size_t i = 0; i < catalog.n(); ++i) {
    const auto& c = catalog.contents[i];
    const double x = mode == Mode::HRB ? c.model.mean_rate() * h[i] : h[i];
    s += utility({catalog.beta, c.w}, x);
  }
  return s;
}

}  // namespace ttlopt
