#include "ttlopt/workload.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ttlopt/error.hpp"
#include "ttlopt/numeric.hpp"

namespace ttlopt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInstance(fmt::format("{} must be positive and finite, got {}", what, v));
  }
}

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("time must be >= 0, got {}", t));
}

// log of sum_j p_j exp(-theta_j t), shifted by the slowest phase for range.
double h_log_survival(const Hyperexponential& h, double theta_min, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < h.p.size(); ++j) {
    s += h.p[j] * std::exp(-(h.theta[j] - theta_min) * t);
  }
  return -theta_min * t + std::log(s);
}

double h_cdf(const Hyperexponential& h, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < h.p.size(); ++j) s += h.p[j] * -std::expm1(-h.theta[j] * t);
  return std::min(1.0, s);
}

double h_density(const Hyperexponential& h, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < h.p.size(); ++j) s += h.p[j] * h.theta[j] * std::exp(-h.theta[j] * t);
  return s;
}

double h_hazard(const Hyperexponential& h, double theta_min, double t) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < h.p.size(); ++j) {
    const double e = h.p[j] * std::exp(-(h.theta[j] - theta_min) * t);
    num += h.theta[j] * e;
    den += e;
  }
  return num / den;
}

double h_age(const Hyperexponential& h, double mu, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < h.p.size(); ++j) s += h.p[j] / h.theta[j] * -std::expm1(-h.theta[j] * t);
  return std::min(1.0, mu * s);
}

double h_quantile(const Hyperexponential& h, double theta_min, double mu, double u) {
  const double target = std::log1p(-u);
  auto f = [&](double t) { return h_log_survival(h, theta_min, t) - target; };
  double hi = 1.0 / mu;
  while (f(hi) > 0.0) hi *= 2.0;
  return numeric::bisect(f, 0.0, hi, 0.0, 2000);
}

double weibull_mean_rate(const Weibull& w) { return 1.0 / (w.theta * std::tgamma(1.0 + 1.0 / w.k)); }

double weibull_age(const Weibull& w, double mu, double t) {
  if (t == 0.0) return 0.0;
  const double c = std::pow(t / w.theta, w.k);
  if (w.k == 0.5) {
    const double r = std::sqrt(t / w.theta);
    return std::min(1.0, 2.0 * mu * w.theta * -std::expm1(-r + std::log1p(r)));
  }
  double integral = 0.0;
  if (w.k < 1.0) {
    // s = t v^(1/k) turns the integrand into exp(-c v) v^(1/k - 1), smooth at 0.
    const double a = 1.0 / w.k - 1.0;
    const double vmax = std::min(1.0, 60.0 / c);
    const double scale = t / w.k;
    integral = scale * numeric::adaptive_simpson(
                           [&](double v) { return std::exp(-c * v) * std::pow(v, a); }, 0.0, vmax,
                           1e-12 / (mu * scale));
  } else {
    const double smax = std::min(t, w.theta * std::pow(60.0, 1.0 / w.k));
    integral = numeric::adaptive_simpson(
        [&](double s) { return std::exp(-std::pow(s / w.theta, w.k)); }, 0.0, smax, 1e-12 / mu);
  }
  return std::min(1.0, mu * integral);
}

}  // namespace

PopularityModel zipf_popularity(std::size_t n, double alpha) {
  if (n == 0) throw InvalidInstance("zipf_popularity: n must be >= 1");
  if (!(alpha >= 0.0)) throw InvalidInstance("zipf_popularity: alpha must be >= 0");
  PopularityModel m{n, alpha, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) m.probabilities[i] = std::pow(static_cast<double>(i + 1), -alpha);
  // Sum smallest first for accuracy.
  double total = 0.0;
  for (std::size_t i = n; i-- > 0;) total += m.probabilities[i];
  for (double& p : m.probabilities) p /= total;
  return m;
}

H2Params mmpp2_to_h2(double theta1, double theta2, double r12, double r21) {
  for (double v : {theta1, theta2, r12, r21}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(fmt::format("mmpp2_to_h2: rates must be positive, got {}", v));
  }
  const double s = theta1 + theta2 + r12 + r21;
  const double d = theta1 - theta2 + r12 - r21;
  const double delta = std::sqrt(d * d + 4.0 * r12 * r21);
  const double u2 = 0.5 * (s + delta);
  const double u1 = 2.0 * (theta1 * theta2 + theta1 * r21 + theta2 * r12) / (s + delta);
  H2Params h{};
  h.delta = delta;
  h.u1 = u1;
  h.u2 = u2;
  if (u2 - u1 <= 1e-14 * u2) {
    h.q1 = 1.0;
  } else {
    const double m = (theta2 * theta2 * r12 + theta1 * theta1 * r21) / (theta1 * r21 + theta2 * r12);
    h.q1 = std::clamp((m - u2) / (u1 - u2), 0.0, 1.0);
  }
  h.q2 = 1.0 - h.q1;
  return h;
}

IrtModel::IrtModel(Variant v) : v_(std::move(v)) {
  std::visit(overloaded{
                 [&](const Exponential& e) { mu_ = e.mu; },
                 [&](const GeneralizedPareto& p) { mu_ = (1.0 - p.k) / p.sigma; },
                 [&](const Hyperexponential& h) {
                   double m = 0.0;
                   for (std::size_t j = 0; j < h.p.size(); ++j) m += h.p[j] / h.theta[j];
                   mu_ = 1.0 / m;
                   theta_min_ = *std::min_element(h.theta.begin(), h.theta.end());
                 },
                 [&](const Weibull& w) { mu_ = weibull_mean_rate(w); },
                 [&](const Uniform& u) { mu_ = 2.0 / u.b; },
                 [&](const Mmpp2& m) {
                   const H2Params p = mmpp2_to_h2(m.theta1, m.theta2, m.r12, m.r21);
                   h2_.p = {p.q1, p.q2};
                   h2_.theta = {p.u1, p.u2};
                   mu_ = (m.theta1 * m.r21 + m.theta2 * m.r12) / (m.r12 + m.r21);
                   theta_min_ = std::min(p.u1, p.u2);
                 },
             },
             v_);
  if (!(mu_ > 0.0) || !std::isfinite(mu_)) throw InvalidInstance("mean rate must be positive and finite");
}

IrtModel IrtModel::exponential(double mu) {
  require_positive(mu, "exponential rate");
  return IrtModel(Exponential{mu});
}

IrtModel IrtModel::pareto(double k, double sigma, double location) {
  if (location != 0.0) throw InvalidInstance("generalized Pareto location must be 0");
  if (!(k >= 0.0 && k < 1.0)) throw InvalidInstance(fmt::format("generalized Pareto shape must be in [0, 1), got {}", k));
  require_positive(sigma, "generalized Pareto scale");
  return IrtModel(GeneralizedPareto{k, sigma});
}

IrtModel IrtModel::hyperexponential(std::vector<double> p, std::vector<double> theta) {
  if (p.empty() || p.size() != theta.size()) throw InvalidInstance("hyperexponential: need matching non-empty phase vectors");
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p[j] >= 0.0)) throw InvalidInstance("hyperexponential: phase probabilities must be >= 0");
    require_positive(theta[j], "hyperexponential phase rate");
    total += p[j];
  }
  if (std::fabs(total - 1.0) > 1e-12) throw InvalidInstance(fmt::format("hyperexponential: phase probabilities sum to {}", total));
  return IrtModel(Hyperexponential{std::move(p), std::move(theta)});
}

IrtModel IrtModel::weibull(double k, double theta) {
  require_positive(k, "Weibull shape");
  require_positive(theta, "Weibull scale");
  return IrtModel(Weibull{k, theta});
}

IrtModel IrtModel::uniform(double b) {
  require_positive(b, "uniform support");
  return IrtModel(Uniform{b});
}

IrtModel IrtModel::mmpp2(double theta1, double theta2, double r12, double r21) {
  require_positive(theta1, "MMPP rate theta1");
  require_positive(theta2, "MMPP rate theta2");
  require_positive(r12, "MMPP switching rate r12");
  require_positive(r21, "MMPP switching rate r21");
  return IrtModel(Mmpp2{theta1, theta2, r12, r21});
}

std::string IrtModel::name() const {
  return std::visit(overloaded{
                        [](const Exponential&) { return std::string("exponential"); },
                        [](const GeneralizedPareto&) { return std::string("pareto"); },
                        [](const Hyperexponential&) { return std::string("hyperexponential"); },
                        [](const Weibull&) { return std::string("weibull"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const Mmpp2&) { return std::string("mmpp2"); },
                    },
                    v_);
}

bool IrtModel::is_exponential() const {
  if (std::holds_alternative<Exponential>(v_)) return true;
  if (const auto* p = std::get_if<GeneralizedPareto>(&v_)) return p->k == 0.0;
  return false;
}

const Hyperexponential* IrtModel::h2() const {
  if (std::holds_alternative<Mmpp2>(v_)) return &h2_;
  return nullptr;
}

double IrtModel::cdf(double t) const {
  require_time(t);
  return std::visit(overloaded{
                        [&](const Exponential& e) { return -std::expm1(-e.mu * t); },
                        [&](const GeneralizedPareto& p) {
                          if (p.k == 0.0) return -std::expm1(-t / p.sigma);
                          return -std::expm1(-std::log1p(p.k * t / p.sigma) / p.k);
                        },
                        [&](const Hyperexponential& h) { return h_cdf(h, t); },
                        [&](const Weibull& w) { return -std::expm1(-std::pow(t / w.theta, w.k)); },
                        [&](const Uniform& u) { return std::min(1.0, t / u.b); },
                        [&](const Mmpp2&) { return h_cdf(h2_, t); },
                    },
                    v_);
}

double IrtModel::survival(double t) const {
  require_time(t);
  return std::visit(overloaded{
                        [&](const Exponential& e) { return std::exp(-e.mu * t); },
                        [&](const GeneralizedPareto& p) {
                          if (p.k == 0.0) return std::exp(-t / p.sigma);
                          return std::exp(-std::log1p(p.k * t / p.sigma) / p.k);
                        },
                        [&](const Hyperexponential& h) { return std::exp(h_log_survival(h, theta_min_, t)); },
                        [&](const Weibull& w) { return std::exp(-std::pow(t / w.theta, w.k)); },
                        [&](const Uniform& u) { return std::max(0.0, 1.0 - t / u.b); },
                        [&](const Mmpp2&) { return std::exp(h_log_survival(h2_, theta_min_, t)); },
                    },
                    v_);
}

double IrtModel::density(double t) const {
  require_time(t);
  return std::visit(overloaded{
                        [&](const Exponential& e) { return e.mu * std::exp(-e.mu * t); },
                        [&](const GeneralizedPareto& p) {
                          if (p.k == 0.0) return std::exp(-t / p.sigma) / p.sigma;
                          return std::exp(-(1.0 / p.k + 1.0) * std::log1p(p.k * t / p.sigma)) / p.sigma;
                        },
                        [&](const Hyperexponential& h) { return h_density(h, t); },
                        [&](const Weibull& w) {
                          const double z = std::pow(t / w.theta, w.k);
                          return w.k / w.theta * std::pow(t / w.theta, w.k - 1.0) * std::exp(-z);
                        },
                        [&](const Uniform& u) { return t <= u.b ? 1.0 / u.b : 0.0; },
                        [&](const Mmpp2&) { return h_density(h2_, t); },
                    },
                    v_);
}

double IrtModel::age(double t) const {
  require_time(t);
  return std::visit(overloaded{
                        [&](const Exponential& e) { return -std::expm1(-e.mu * t); },
                        [&](const GeneralizedPareto& p) {
                          if (p.k == 0.0) return -std::expm1(-t / p.sigma);
                          return -std::expm1((p.k - 1.0) / p.k * std::log1p(p.k * t / p.sigma));
                        },
                        [&](const Hyperexponential& h) { return h_age(h, mu_, t); },
                        [&](const Weibull& w) { return weibull_age(w, mu_, t); },
                        [&](const Uniform& u) {
                          const double x = std::min(1.0, t / u.b);
                          return 2.0 * x - x * x;
                        },
                        [&](const Mmpp2&) { return h_age(h2_, mu_, t); },
                    },
                    v_);
}

double IrtModel::hazard(double t) const {
  require_time(t);
  return std::visit(overloaded{
                        [&](const Exponential& e) { return e.mu; },
                        [&](const GeneralizedPareto& p) { return 1.0 / (p.sigma + p.k * t); },
                        [&](const Hyperexponential& h) { return h_hazard(h, theta_min_, t); },
                        [&](const Weibull& w) { return w.k / w.theta * std::pow(t / w.theta, w.k - 1.0); },
                        [&](const Uniform& u) {
                          if (t >= u.b) throw SaturatedError(fmt::format("uniform hazard undefined at t = {} >= b", t));
                          return 1.0 / (u.b - t);
                        },
                        [&](const Mmpp2&) { return h_hazard(h2_, theta_min_, t); },
                    },
                    v_);
}

double IrtModel::hazard_at_infinity() const {
  return std::visit(overloaded{
                        [&](const Exponential& e) { return e.mu; },
                        [&](const GeneralizedPareto& p) { return p.k == 0.0 ? 1.0 / p.sigma : 0.0; },
                        [&](const Hyperexponential&) { return theta_min_; },
                        [&](const Weibull& w) {
                          if (w.k < 1.0) return 0.0;
                          if (w.k == 1.0) return 1.0 / w.theta;
                          return kInfiniteTimer;
                        },
                        [&](const Uniform&) { return kInfiniteTimer; },
                        [&](const Mmpp2&) { return theta_min_; },
                    },
                    v_);
}

double IrtModel::quantile(double u) const {
  if (!(u >= 0.0)) throw DomainError(fmt::format("quantile: u must be in [0, 1), got {}", u));
  if (u >= 1.0) return kInfiniteTimer;
  if (u == 0.0) return 0.0;
  return std::visit(overloaded{
                        [&](const Exponential& e) { return -std::log1p(-u) / e.mu; },
                        [&](const GeneralizedPareto& p) {
                          if (p.k == 0.0) return -p.sigma * std::log1p(-u);
                          return p.sigma / p.k * std::expm1(-p.k * std::log1p(-u));
                        },
                        [&](const Hyperexponential& h) { return h_quantile(h, theta_min_, mu_, u); },
                        [&](const Weibull& w) { return w.theta * std::pow(-std::log1p(-u), 1.0 / w.k); },
                        [&](const Uniform& un) { return u * un.b; },
                        [&](const Mmpp2&) { return h_quantile(h2_, theta_min_, mu_, u); },
                    },
                    v_);
}

double IrtModel::g(double x) const {
  if (!(x >= 0.0)) throw DomainError(fmt::format("occupancy map: x must be in [0, 1), got {}", x));
  if (x >= 1.0) throw SaturatedError("occupancy map undefined at x >= 1");
  return std::visit(overloaded{
                        [&](const Exponential&) { return x; },
                        [&](const GeneralizedPareto& p) { return -std::expm1((1.0 - p.k) * std::log1p(-x)); },
                        [&](const Uniform&) { return 2.0 * x - x * x; },
                        [&](const auto&) { return age(quantile(x)); },
                    },
                    v_);
}

double IrtModel::g_prime(double x) const {
  if (!(x >= 0.0)) throw DomainError(fmt::format("occupancy map: x must be in [0, 1), got {}", x));
  if (x >= 1.0) throw SaturatedError("occupancy map undefined at x >= 1");
  return std::visit(overloaded{
                        [&](const Exponential&) { return 1.0; },
                        [&](const GeneralizedPareto& p) { return (1.0 - p.k) * std::pow(1.0 - x, -p.k); },
                        [&](const Uniform&) { return 2.0 * (1.0 - x); },
                        [&](const auto&) { return mu_ / hazard(quantile(x)); },
                    },
                    v_);
}

bool IrtModel::is_dhr() const {
  return std::visit(overloaded{
                        [](const Weibull& w) { return w.k <= 1.0; },
                        [](const Uniform&) { return false; },
                        [](const auto&) { return true; },
                    },
                    v_);
}

double IrtModel::sample_irt(Rng& rng) const {
  const double s = rng.uniform();  // survival level
  return std::visit(overloaded{
                        [&](const Exponential& e) { return -std::log(s) / e.mu; },
                        [&](const GeneralizedPareto& p) {
                          if (p.k == 0.0) return -p.sigma * std::log(s);
                          return p.sigma / p.k * std::expm1(-p.k * std::log(s));
                        },
                        [&](const Hyperexponential& h) {
                          double acc = 0.0;
                          std::size_t j = 0;
                          for (; j + 1 < h.p.size(); ++j) {
                            acc += h.p[j];
                            if (s <= acc) break;
                          }
                          return rng.exponential(h.theta[j]);
                        },
                        [&](const Weibull& w) { return w.theta * std::pow(-std::log(s), 1.0 / w.k); },
                        [&](const Uniform& u) { return u.b * (1.0 - s); },
                        [&](const Mmpp2&) {
                          const std::size_t j = s <= h2_.p[0] ? 0 : 1;
                          return rng.exponential(h2_.theta[j]);
                        },
                    },
                    v_);
}

IrtPoint irt_eval(const IrtModel& model, double t) {
  return {model.cdf(t), model.density(t), model.age(t), model.hazard(t)};
}

double irt_quantile(const IrtModel& model, double u) { return model.quantile(u); }

double mean_rate(const IrtModel& model) { return model.mean_rate(); }

OccupancyPoint occupancy_map(const IrtModel& model, double x) { return {model.g(x), model.g_prime(x)}; }

bool is_dhr(const IrtModel& model) { return model.is_dhr(); }

ArrivalSampler::ArrivalSampler(const IrtModel& model, Rng rng) : model_(&model), rng_(std::move(rng)) {
  if (const auto* m = std::get_if<Mmpp2>(&model.variant())) {
    const double w1 = m->theta1 * m->r21;
    const double w2 = m->theta2 * m->r12;
    state_ = rng_.uniform() * (w1 + w2) <= w1 ? 0 : 1;
  }
}

double ArrivalSampler::next() {
  double dt = 0.0;
  do {
    dt = std::holds_alternative<Mmpp2>(model_->variant()) ? next_mmpp() : model_->sample_irt(rng_);
  } while (!(dt > 0.0));
  now_ += dt;
  return now_;
}

// Exact sampling of the time to the next arrival. A "cycle" is one sojourn
// in the current state followed by one in the other state; whole cycles
// without an arrival are skipped in a single geometric/gamma draw so that
// very fast switching stays cheap.
double ArrivalSampler::next_mmpp() {
  const auto& m = std::get<Mmpp2>(model_->variant());
  const double theta[2] = {m.theta1, m.theta2};
  const double r[2] = {m.r12, m.r21};
  const int s = state_;
  const int o = 1 - s;
  const double rate_s = theta[s] + r[s];
  const double rate_o = theta[o] + r[o];
  const double a = theta[s] / rate_s;
  const double b = theta[o] / rate_o;
  const double hit = a + b - a * b;  // cycle contains an arrival

  double t = 0.0;
  std::geometric_distribution<long long> geo(std::min(1.0, hit));
  const long long k = geo(rng_);
  if (k > 0) {
    std::gamma_distribution<double> gs(static_cast<double>(k), 1.0 / rate_s);
    std::gamma_distribution<double> go(static_cast<double>(k), 1.0 / rate_o);
    t += gs(rng_) + go(rng_);
  }
  t += rng_.exponential(rate_s);
  if (rng_.uniform() * hit > a) {
    t += rng_.exponential(rate_o);
    state_ = o;
  }
  return t;
}

RequestStream sample_stream(const IrtModel& model, std::uint64_t seed, double horizon, std::size_t content_id) {
  RequestStream out;
  out.content_id = content_id;
  out.seed = seed;
  if (!(horizon > 0.0)) return out;
  ArrivalSampler sampler(model, Rng(seed));
  for (;;) {
    const double t = sampler.next();
    if (t > horizon) break;
    out.times.push_back(t);
  }
  return out;
}

}  // namespace ttlopt
