#include <fmt/core.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "ttlopt/cache_sim.hpp"
#include "ttlopt/catalog_io.hpp"
#include "ttlopt/error.hpp"
#include "ttlopt/experiments.hpp"
#include "ttlopt/stability.hpp"
#include "ttlopt/stats.hpp"
#include "ttlopt/trace.hpp"

using namespace ttlopt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string default_out_dir() {
  const char* env = std::getenv("TTLOPT_OUTPUT_DIR");
  return env != nullptr && *env != '\0' ? env : "ttlopt_out";
}

// Output directory plus the list of files written, for the manifest.
class Run {
 public:
  Run(std::string command, std::string dir, std::uint64_t seed, json config)
      : command_(std::move(command)), dir_(std::move(dir)), seed_(seed), config_(std::move(config)) {
    fs::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    outputs_.push_back(name);
    std::ofstream f(fs::path(dir_) / name);
    if (!f) throw Error(fmt::format("cannot write {}", (fs::path(dir_) / name).string()));
    f.precision(17);
    return f;
  }

  void finish(const json& summary) {
    json m;
    m["command"] = command_;
    m["seed"] = seed_;
    m["config"] = config_;
    m["config_hash"] = fmt::format("{:016x}", fnv1a(config_.dump()));
    m["outputs"] = outputs_;
    m["summary"] = summary;
    std::ofstream(fs::path(dir_) / "manifest.json") << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  std::string dir_;
  std::uint64_t seed_;
  json config_;
  std::vector<std::string> outputs_;
};

struct Common {
  std::string catalog;
  std::string out = default_out_dir();
  std::uint64_t seed = 1;
  std::string mode = "hrb";
  double beta = NAN;
  double budget = NAN;
};

void add_common(CLI::App* app, Common& c, bool needs_catalog) {
  auto* opt = app->add_option("--catalog", c.catalog, "catalog JSON file");
  if (needs_catalog) opt->required();
  app->add_option("--out", c.out, "output directory (default $TTLOPT_OUTPUT_DIR or ./ttlopt_out)");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--mode", c.mode, "hrb or hpb")->check(CLI::IsMember({"hrb", "hpb"}));
  app->add_option("--beta", c.beta, "override the catalog's fairness parameter");
  app->add_option("--budget", c.budget, "override the catalog's budget B");
}

Catalog load(const Common& c) {
  Catalog cat = load_catalog(c.catalog);
  if (!std::isnan(c.beta)) cat.beta = c.beta;
  if (!std::isnan(c.budget)) cat.B = c.budget;
  validate(cat);
  return cat;
}

json common_config(const Common& c) {
  return {{"catalog", c.catalog}, {"mode", c.mode}, {"beta", c.beta}, {"budget", c.budget}};
}

double generator_alpha(const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  if (j.contains("generator")) return j["generator"].value("alpha", 0.8);
  return NAN;
}

PenaltySpec parse_penalty(const std::string& s) {
  if (s == "blog") return PenaltySpec::blog();
  if (s.rfind("power:", 0) == 0) return PenaltySpec::power(std::stod(s.substr(6)));
  throw InvalidInstance(fmt::format("unknown penalty '{}' (blog or power:<m>)", s));
}

void write_solution(std::ofstream& f, const CumSolution& s) {
  f << fmt::format("# eta_star={:.17g},B={:.17g},mode={}\n", s.eta, s.B, mode_name(s.mode));
  f << "id,timer,hit_prob,hit_rate,occupancy\n";
  for (const auto& c : s.contents) {
    f << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", c.id + 1, c.timer, c.hit_prob, c.hit_rate, c.occupancy);
  }
}

void write_stats(std::ofstream& f, const SimStats& st, const std::vector<double>* optimal) {
  f << "id,requests,hits,hit_prob,hit_rate";
  if (!st.implied_hit_rate.empty()) f << ",implied_hit_rate";
  if (optimal != nullptr) f << ",optimal_hit_rate";
  f << "\n";
  for (std::size_t i = 0; i < st.requests.size(); ++i) {
    f << fmt::format("{},{},{},{:.17g},{:.17g}", i + 1, st.requests[i], st.hits[i], st.hit_prob(i), st.hit_rate(i));
    if (!st.implied_hit_rate.empty()) f << fmt::format(",{:.17g}", st.implied_hit_rate[i]);
    if (optimal != nullptr) f << fmt::format(",{:.17g}", (*optimal)[i]);
    f << "\n";
  }
}

void write_histogram(std::ofstream& f, const SimStats& st) {
  f << "size,probability\n";
  const auto h = st.histogram();
  for (std::size_t k = 0; k < h.size(); ++k) f << fmt::format("{},{:.17g}\n", k, h[k]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TTL cache utility optimization toolkit"};
  app.require_subcommand(1);

  Common solve_c, cmp_c, sim_c, tr_c;

  auto* solve = app.add_subcommand("solve", "centralized HRB/HPB optimum");
  add_common(solve, solve_c, true);

  auto* compare = app.add_subcommand("compare", "HRB vs HPB hit rates and the crossover index");
  add_common(compare, cmp_c, true);
  double cmp_alpha = NAN;
  compare->add_option("--alpha", cmp_alpha, "Zipf exponent (default: the catalog generator's)");

  auto* simulate = app.add_subcommand("simulate", "run a controller against the TTL cache simulator");
  add_common(simulate, sim_c, true);
  std::string algo = "dual", estimator = "ewma", penalty_s = "blog";
  AlgoParams ap;
  std::size_t requests = 1000000, window = 100000;
  double warmup = 0.2;
  simulate->add_option("--algo", algo, "dual|primal|primal-dual|online-poisson|dual-poisson|lru-dual");
  simulate->add_option("--gamma", ap.gamma, "dual step size");
  simulate->add_option("--rho", ap.rho, "primal step size");
  simulate->add_option("--eta0", ap.eta0, "initial price (<= 0: algorithm default)");
  simulate->add_option("--estimator", estimator, "raw|ewma")->check(CLI::IsMember({"raw", "ewma"}));
  simulate->add_option("--penalty", penalty_s, "blog or power:<m>");
  simulate->add_option("--requests", requests, "simulated requests");
  simulate->add_option("--window", window, "final requests over which implied hit rates are averaged");
  simulate->add_option("--warmup", warmup, "fraction of requests excluded from stats");

  auto* stability = app.add_subcommand("stability", "Poisson dual recursion: thresholds and trajectories");
  std::string st_out = default_out_dir();
  double st_W = 1.0, st_B = 100.0, st_gamma = NAN, st_factor = 0.5, st_eta0 = 1.01, st_schedule = NAN;
  std::size_t st_steps = 10000;
  stability->add_option("--W", st_W, "total weight");
  stability->add_option("--B", st_B, "budget");
  stability->add_option("--gamma", st_gamma, "constant step size");
  stability->add_option("--gamma-factor", st_factor, "step size as a multiple of 2W/B^2 (if --gamma unset)");
  stability->add_option("--schedule", st_schedule, "use the state-dependent step, scaled by this fraction");
  stability->add_option("--eta0-factor", st_eta0, "start at this multiple of eta*");
  stability->add_option("--steps", st_steps, "iterations");
  stability->add_option("--out", st_out, "output directory");

  auto* trace = app.add_subcommand("trace", "replay a trace: LRU fidelity and weighted utility report");
  add_common(trace, tr_c, false);
  std::string trace_path, trace_fmt = "auto";
  std::size_t synth = 1000000, tr_window = 3000;
  double tr_gamma_lru = 1e-7;
  trace->add_option("--trace", trace_path, "trace file (time,content_id or content_id lines)");
  trace->add_option("--format", trace_fmt, "auto|csv|order")->check(CLI::IsMember({"auto", "csv", "order"}));
  trace->add_option("--synth", synth, "requests to synthesize from --catalog when no --trace is given");
  trace->add_option("--window", tr_window, "window length in requests");
  trace->add_option("--lru-gamma", tr_gamma_lru, "step size of the LRU dual controller");

  auto* limits = app.add_subcommand("limits", "2-MMPP hyperexponential limits and the fast-switching KS check");
  std::string lim_out = default_out_dir();
  double th1 = 0.05, th2 = 0.01, a12 = 5, a21 = 2, ks_x = 1e9;
  std::vector<double> xs{1e-9, 1e-7, 1e-5, 1e-3, 1e-1, 10, 1e3, 1e5, 1e9};
  std::uint64_t lim_seed = 1;
  limits->add_option("--theta1", th1, "state-1 arrival rate");
  limits->add_option("--theta2", th2, "state-2 arrival rate");
  limits->add_option("--a12", a12, "switching rate 1->2 per unit x");
  limits->add_option("--a21", a21, "switching rate 2->1 per unit x");
  limits->add_option("--x", xs, "switching scales");
  limits->add_option("--ks-x", ks_x, "scale used for the KS check");
  limits->add_option("--seed", lim_seed, "random seed");
  limits->add_option("--out", lim_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*solve) {
      Catalog cat = load(solve_c);
      auto sol = solve_cum(cat, parse_mode(solve_c.mode));
      Run run("solve", solve_c.out, solve_c.seed, common_config(solve_c));
      auto f = run.open("solution.csv");
      write_solution(f, sol);
      fmt::print("eta*={:.10g} occupancy={:.10g} aggregate_hit_rate={:.10g}\n", sol.eta, sol.total_occupancy(),
                 sol.aggregate_hit_rate());
      run.finish({{"eta_star", sol.eta}, {"occupancy", sol.total_occupancy()}, {"aggregate_hit_rate", sol.aggregate_hit_rate()}});
    } else if (*compare) {
      Catalog cat = load(cmp_c);
      auto r = solve_cum(cat, Mode::HRB);
      auto p = solve_cum(cat, Mode::HPB);
      const double alpha = std::isnan(cmp_alpha) ? generator_alpha(cmp_c.catalog) : cmp_alpha;
      json cfg = common_config(cmp_c);
      cfg["alpha"] = alpha;
      Run run("compare", cmp_c.out, cmp_c.seed, cfg);
      auto f = run.open("compare.csv");
      std::vector<double> cr, cp;
      const bool closed = cat.beta != 1.0 && std::all_of(cat.contents.begin(), cat.contents.end(),
                                                          [](const Content& c) { return c.model.is_exponential(); });
      if (closed) {
        cr = poisson_closed_form_probs(cat, Mode::HRB);
        cp = poisson_closed_form_probs(cat, Mode::HPB);
      }
      f << "id,hit_rate_hrb,hit_rate_hpb,hit_prob_hrb,hit_prob_hpb,sign";
      if (closed) f << ",closed_rate_hrb,closed_rate_hpb,closed_sign";
      f << "\n";
      std::size_t closed_change = 0;
      // 1-based index of the last content before the first sign flip, ties skipped
      std::size_t first_change = 0;
      int last_sign = 0;
      for (std::size_t i = 0; i < cat.n(); ++i) {
        const double d = r.contents[i].hit_rate - p.contents[i].hit_rate;
        const int sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (sign != 0) {
          if (first_change == 0 && last_sign != 0 && sign != last_sign) first_change = i;
          last_sign = sign;
        }
        f << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{}", i + 1, r.contents[i].hit_rate, p.contents[i].hit_rate,
                         r.contents[i].hit_prob, p.contents[i].hit_prob, sign);
        if (closed) {
          const double mu = cat.contents[i].model.mean_rate();
          const double a = mu * cr[i], b = mu * cp[i];
          const int cs = a > b ? 1 : (a < b ? -1 : 0);
          if (closed_change == 0 && i > 0 && cs != (mu * cr[0] > mu * cp[0] ? 1 : -1)) closed_change = i;
          f << fmt::format(",{:.17g},{:.17g},{}", a, b, cs);
        }
        f << "\n";
      }
      json summary{{"first_sign_change_after", first_change}};
      if (closed) summary["closed_form_sign_change_after"] = closed_change;
      std::string i0s = "undefined";
      if (!std::isnan(alpha) && cat.beta != 1.0) {
        const auto i0 = crossover_index(cat.weights(), alpha, cat.beta);
        summary["i0"] = i0;
        i0s = std::to_string(i0);
      }
      fmt::print("i0={} solver_sign_change_after={}", i0s, first_change);
      if (closed) fmt::print(" closed_form_sign_change_after={}", closed_change);
      fmt::print("\n");
      run.finish(summary);
    } else if (*simulate) {
      Catalog cat = load(sim_c);
      ap.mode = parse_mode(sim_c.mode);
      ap.estimator = estimator == "raw" ? Estimator::Raw : Estimator::Ewma;
      ap.penalty = parse_penalty(penalty_s);
      const Algo a = parse_algo(algo);
      json cfg = common_config(sim_c);
      cfg.update({{"algo", algo}, {"gamma", ap.gamma}, {"rho", ap.rho}, {"eta0", ap.eta0}, {"estimator", estimator},
                  {"penalty", penalty_s}, {"requests", requests}, {"window", window}, {"warmup", warmup}});
      Run run("simulate", sim_c.out, sim_c.seed, cfg);

      auto ctl = make_controller(a, cat, ap);
      CatalogEventSource src(cat, sim_c.seed);
      SimOptions opt;
      opt.max_requests = requests;
      opt.warmup_fraction = warmup;
      opt.trajectory_stride = std::max<std::size_t>(1, requests / 1000);
      opt.implied_catalog = &cat;
      opt.implied_window = window;
      opt.implied_snapshots = window > 0 ? 100 : 0;
      auto st = simulate_ttl(src, cat.n(), *ctl, opt);

      std::vector<double> optimal;
      json summary{{"aggregate_hit_rate", st.aggregate_hit_rate()},
                   {"mean_occupancy", st.mean_occupancy},
                   {"mass_within_15pct", st.mass_within(0.85 * cat.B, 1.15 * cat.B)},
                   {"final_eta", ctl->eta()}};
      try {
        auto sol = solve_cum(cat, ap.mode);
        optimal = sol.hit_rates();
        summary["optimal_aggregate_hit_rate"] = sol.aggregate_hit_rate();
        summary["eta_star"] = sol.eta;
        if (!st.implied_hit_rate.empty()) {
          summary["max_rel_error_top100"] = max_relative_error(st.implied_hit_rate, optimal, 100);
        }
      } catch (const NonConvexInstance&) {
      }
      auto f = run.open("stats.csv");
      write_stats(f, st, optimal.empty() ? nullptr : &optimal);
      auto h = run.open("histogram.csv");
      write_histogram(h, st);
      auto t = run.open("trajectory.csv");
      t << "time,occupancy,eta\n";
      for (const auto& p : st.trajectory) t << fmt::format("{:.17g},{},{:.17g}\n", p.time, p.occupancy, p.eta);
      fmt::print("{}\n", summary.dump());
      run.finish(summary);
    } else if (*stability) {
      const double eta_star = st_W / st_B;
      const double thr = poisson_threshold(st_W, st_B);
      const double gamma = std::isnan(st_gamma) ? st_factor * thr : st_gamma;
      json cfg{{"W", st_W}, {"B", st_B}, {"gamma", gamma}, {"schedule", st_schedule}, {"eta0_factor", st_eta0},
               {"steps", st_steps}};
      Run run("stability", st_out, 0, cfg);
      StabilityReport rep =
          std::isnan(st_schedule)
              ? simulate_recursion(st_eta0 * eta_star, gamma, st_W, st_B, st_steps)
              : simulate_recursion(
                    st_eta0 * eta_star, [&](double e) { return scheduled_gamma(e, st_W, st_B, st_schedule); }, st_W,
                    st_B, st_steps);
      auto f = run.open("trajectory.csv");
      f << "step,eta,delta_v\n";
      for (std::size_t k = 0; k < rep.trajectory.size(); ++k) {
        const double e = rep.trajectory[k];
        double dv = NAN;
        try {
          dv = dual_fn_and_delta_v(e, st_W, st_B, gamma).delta_v;
        } catch (const DomainError&) {
        }
        f << fmt::format("{},{:.17g},{:.17g}\n", k, e, dv);
      }
      fmt::print("eta*={:.10g} threshold={:.10g} gamma={:.10g} multiplier={:.10g}\n", eta_star, thr, gamma,
                 1.0 - gamma * st_B * st_B / st_W);
      fmt::print("verdict: {}\n", verdict_name(rep.verdict));
      run.finish({{"eta_star", eta_star}, {"threshold", thr}, {"verdict", verdict_name(rep.verdict)},
                  {"gamma_hat_star_2", gamma_star_schedule(2.0)}});
    } else if (*trace) {
      Trace tr;
      Catalog base;
      if (!trace_path.empty()) {
        const TraceFormat tf = trace_fmt == "csv" ? TraceFormat::Csv
                               : trace_fmt == "order" ? TraceFormat::OrderOnly
                                                      : TraceFormat::Auto;
        tr = parse_trace(trace_path, tf);
        base.beta = std::isnan(tr_c.beta) ? 2.0 : tr_c.beta;
        base.B = std::isnan(tr_c.budget) ? 100.0 : tr_c.budget;
      } else {
        if (tr_c.catalog.empty()) throw InvalidInstance("trace needs --trace or --catalog");
        base = load(tr_c);
        tr = synth_trace(base, tr_c.seed, synth);
      }
      if (static_cast<double>(tr.n) <= base.B) throw InvalidInstance("trace has no more contents than the budget");
      json cfg = common_config(tr_c);
      cfg.update({{"trace", trace_path}, {"synth", synth}, {"window", tr_window}, {"lru_gamma", tr_gamma_lru}});
      Run run("trace", tr_c.out, tr_c.seed, cfg);
      const auto B = static_cast<std::size_t>(base.B);
      const auto rates = tr.rates();

      SimOptions opt;
      opt.max_requests = tr.size();
      opt.warmup_fraction = 0.0;
      opt.record_hit_sequence = true;
      VectorEventSource s1(tr.records);
      auto lru = simulate_replacement(Policy::LRU, s1, tr.n, B, tr_c.seed, opt);
      double total = 0.0;
      for (double r : rates) total += r;
      LruDualController ld(base.B, tr_gamma_lru, total / base.B);
      VectorEventSource s2(tr.records);
      auto lds = simulate_ttl(s2, tr.n, ld, opt);
      auto wl = window_hit_counts(lru.hit_sequence, tr_window);
      auto wd = window_hit_counts(lds.hit_sequence, tr_window);
      auto err = windowed_relative_error(wd, wl);
      auto wf = run.open("windows.csv");
      wf << "window,lru_hits,lru_dual_hits,relative_error\n";
      double mean_err = 0.0;
      for (std::size_t k = 0; k < err.size(); ++k) {
        wf << fmt::format("{},{},{},{:.17g}\n", k, wl[k], wd[k], err[k]);
        mean_err += err[k] / static_cast<double>(err.size());
      }

      std::vector<double> lr(tr.n);
      for (std::size_t i = 0; i < tr.n; ++i) lr[i] = lru.hit_rate(i);
      json summary{{"mean_windowed_error", mean_err}};
      for (auto kind : {WeightScheme::Kind::RateProportional, WeightScheme::Kind::RateInverse,
                        WeightScheme::Kind::UniformRandom}) {
        const WeightScheme ws{kind, tr_c.seed};
        const auto w = ws.weights(rates);
        Catalog pois;
        pois.beta = base.beta;
        pois.B = base.B;
        for (std::size_t i = 0; i < tr.n; ++i) {
          pois.contents.push_back({IrtModel::exponential(std::max(rates[i], 1e-12)), w[i], i});
        }
        OnlinePoissonController::Options oo;
        oo.eta0 = poisson_closed_form(pois, Mode::HRB).eta;
        oo.gamma = 0.01 * pois.beta * oo.eta0 / pois.B;
        OnlinePoissonController on(pois, oo);
        VectorEventSource s3(tr.records);
        SimOptions o3 = opt;
        o3.record_hit_sequence = false;
        auto ons = simulate_ttl(s3, tr.n, on, o3);
        std::vector<double> orr(tr.n);
        for (std::size_t i = 0; i < tr.n; ++i) orr[i] = ons.hit_rate(i);
        auto rep = weighted_utility_report({"online-poisson", "lru"}, {orr, lr}, 1, w, base.beta);
        const char* slug = kind == WeightScheme::Kind::RateProportional ? "rate"
                           : kind == WeightScheme::Kind::RateInverse    ? "inverse"
                                                                         : "uniform";
        auto rf = run.open(fmt::format("report_{}.csv", slug));
        rf << "policy,aggregate_utility,normalized\n";
        for (const auto& r : rep) rf << fmt::format("{},{:.17g},{:.17g}\n", r.policy, r.aggregate_utility, r.normalized);
        summary[ws.name()] = rep[0].normalized;
      }
      fmt::print("{}\n", summary.dump());
      run.finish(summary);
    } else if (*limits) {
      json cfg{{"theta1", th1}, {"theta2", th2}, {"a12", a12}, {"a21", a21}, {"x", xs}, {"ks_x", ks_x}};
      Run run("limits", lim_out, lim_seed, cfg);
      auto f = run.open("limits.csv");
      f << "x,q1,q2,u1,u2,mean_rate,q1_small_x,u1_small_x,u2_small_x\n";
      const double q1_lim = th2 * a12 / (th1 * a21 + th2 * a12);
      for (double x : xs) {
        auto h = mmpp2_to_h2(th1, th2, a12 * x, a21 * x);
        f << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", x, h.q1, h.q2,
                         h.u1, h.u2, 1.0 / (h.q1 / h.u1 + h.q2 / h.u2), q1_lim, std::min(th1, th2), std::max(th1, th2));
      }
      auto m = IrtModel::mmpp2(th1, th2, a12 * ks_x, a21 * ks_x);
      auto s = sample_stream(m, lim_seed, 5000.0 / m.mean_rate());
      std::vector<double> irts;
      double prev = 0.0;
      for (double t : s.times) {
        irts.push_back(t - prev);
        prev = t;
      }
      const double mu = m.mean_rate();
      auto ks = ks_test(irts, [mu](double t) { return 1.0 - std::exp(-mu * t); });
      fmt::print("ks x={:.3g} samples={} D={:.6g} p={:.6g}\n", ks_x, irts.size(), ks.statistic, ks.p_value);
      run.finish({{"ks_statistic", ks.statistic}, {"ks_p_value", ks.p_value}, {"samples", irts.size()}});
    }
  } catch (const InvalidInstance& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const NonConvexInstance& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
