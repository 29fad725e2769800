// Acceptance checks. One PASS/FAIL line per criterion; exit status is nonzero
// if any criterion fails.
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <deque>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ttlopt/cache_sim.hpp"
#include "ttlopt/error.hpp"
#include "ttlopt/experiments.hpp"
#include "ttlopt/stability.hpp"
#include "ttlopt/stats.hpp"
#include "ttlopt/trace.hpp"

using namespace ttlopt;

namespace {

// Pinned tolerances and budgets.
constexpr double kClosedFormRel = 1e-8;
constexpr double kCapacityAbs = 1e-6;
constexpr double kIdentityAbs = 1e-8;
constexpr double kConvergenceRel = 0.02;
constexpr double kHistogramMass = 0.95;
constexpr double kMultiplierAbs = 1e-3;
constexpr double kGammaHatStar2 = 1.2564;
constexpr double kGammaHatAbs = 1e-4;
constexpr double kLimitAbs = 1e-6;
constexpr double kKsLevel = 0.01;
constexpr double kMmppRateRel = 0.10;
constexpr double kWindowedError = 0.10;
constexpr double kCheRel = 0.05;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && s > budget_s) {
    o.pass = false;
    o.detail += fmt::format("; over time budget {:.0f}s", budget_s);
  }
  if (!o.pass) ++failures;
  fmt::print("{} criterion {:>2} [{}] {} ({:.1f}s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, s);
  std::fflush(stdout);
}

double iso(double beta, double w, double x) {
  return beta == 1.0 ? w * std::log(x) : w * std::pow(x, 1.0 - beta) / (1.0 - beta);
}

// Every solution produced along the way is checked against the budget.
std::deque<std::pair<const Catalog*, CumSolution>> solved;
std::deque<Catalog> catalogs;

const CumSolution& solve_logged(const Catalog& c, Mode m) {
  solved.emplace_back(&c, solve_cum(c, m));
  return solved.back().second;
}

double capacity_residual(const Catalog& c, const CumSolution& s) {
  double occ = 0.0;
  for (std::size_t i = 0; i < c.n(); ++i) {
    const double t = s.contents[i].timer;
    occ += is_infinite_timer(t) ? 1.0 : c.contents[i].model.age(t);
  }
  return std::fabs(occ - c.B);
}

// Unclamped closed-form hit probabilities for all-exponential catalogs.
std::vector<double> closed_form(const Catalog& c, Mode m) {
  std::vector<double> a;
  for (const auto& x : c.contents) {
    const double mu = x.model.mean_rate();
    a.push_back(std::pow(x.w, 1.0 / c.beta) * (m == Mode::HRB ? std::pow(mu, 1.0 / c.beta - 1.0) : 1.0));
  }
  const double s = std::accumulate(a.begin(), a.end(), 0.0);
  for (double& v : a) v *= c.B / s;
  return a;
}

double aggregate_implied(const SimStats& st) {
  return std::accumulate(st.implied_hit_rate.begin(), st.implied_hit_rate.end(), 0.0);
}

}  // namespace

int main() {
  criterion(1, "closed forms", 5.0, [] {
    double worst = 0.0;
    int compared = 0, skipped = 0;
    for (double beta : {0.8, 2.0}) {
      for (WeightRule rule : {WeightRule::Unit, WeightRule::Rate}) {
        catalogs.push_back(zipf_exponential_catalog(1000, 0.8, 1.0, 100, beta, rule));
        const Catalog& c = catalogs.back();
        for (Mode m : {Mode::HRB, Mode::HPB}) {
          const auto cf = closed_form(c, m);
          const auto& s = solve_logged(c, m);
          if (*std::max_element(cf.begin(), cf.end()) > 1.0) {
            ++skipped;  // the closed form leaves the feasible box
            continue;
          }
          ++compared;
          for (std::size_t i = 0; i < c.n(); ++i) worst = std::max(worst, std::fabs(s.contents[i].hit_prob / cf[i] - 1));
        }
      }
    }
    return Outcome{compared >= 4 && worst < kClosedFormRel,
                   fmt::format("max rel error {:.2e} over {} unclamped instances ({} clamped skipped)", worst, compared,
                               skipped)};
  });

  criterion(3, "HRB vs HPB comparison", 0, [] {
    // identical contents: HRB and HPB coincide
    double t1 = 0.0;
    for (double beta : {0.8, 2.0}) {
      Catalog c;
      c.beta = beta;
      c.B = 100;
      for (std::size_t i = 0; i < 1000; ++i) c.contents.push_back({IrtModel::exponential(1e-3), 1.0, i});
      catalogs.push_back(c);
      Catalog p = c;
      for (auto& x : p.contents) x.model = IrtModel::pareto(0.3, 0.7 / 1e-3);
      catalogs.push_back(p);
      for (std::size_t k : {catalogs.size() - 2, catalogs.size() - 1}) {
        const auto& r = solve_logged(catalogs[k], Mode::HRB);
        const auto& q = solve_logged(catalogs[k], Mode::HPB);
        for (std::size_t i = 0; i < 1000; ++i) t1 = std::max(t1, std::fabs(r.contents[i].hit_prob - q.contents[i].hit_prob));
      }
    }
    // beta = 1 on the benchmark: same hit probabilities
    double t2 = 0.0;
    for (WeightRule rule : {WeightRule::Unit, WeightRule::Rate}) {
      catalogs.push_back(zipf_exponential_catalog(1000, 0.8, 1.0, 100, 1.0, rule));
      const auto& r = solve_logged(catalogs.back(), Mode::HRB);
      const auto& q = solve_logged(catalogs.back(), Mode::HPB);
      for (std::size_t i = 0; i < 1000; ++i) t2 = std::max(t2, std::fabs(r.contents[i].hit_prob - q.contents[i].hit_prob));
    }
    // sign patterns and crossover index
    int pattern_bad = 0, i0_bad = 0, solver_bad = 0, solver_checked = 0;
    std::string i0s;
    for (double beta : {0.5, 0.8, 2.0, 4.0}) {
      for (WeightRule rule : {WeightRule::Unit, WeightRule::Rate}) {
        catalogs.push_back(zipf_exponential_catalog(1000, 0.8, 1.0, 100, beta, rule));
        const Catalog& c = catalogs.back();
        const auto hr = closed_form(c, Mode::HRB);
        const auto hp = closed_form(c, Mode::HPB);
        std::size_t last_hrb_ahead = 0;
        for (std::size_t i = 0; i < c.n(); ++i) {
          if (hr[i] > hp[i]) last_hrb_ahead = i + 1;
        }
        const std::size_t i0 = crossover_index(c.weights(), 0.8, beta);
        i0s += fmt::format(" {}", i0);
        for (std::size_t i = 0; i < c.n(); ++i) {
          const bool before = i + 1 <= i0;
          const bool hrb_ahead = hr[i] > hp[i];
          if (hrb_ahead != (beta < 1.0 ? before : !before)) ++pattern_bad;
        }
        if (beta < 1.0 && last_hrb_ahead != i0) ++i0_bad;
        const auto& sr = solve_logged(c, Mode::HRB);
        const auto& sp = solve_logged(c, Mode::HPB);
        bool clamped = false;
        for (std::size_t i = 0; i < c.n(); ++i) clamped |= sr.contents[i].clamped || sp.contents[i].clamped;
        if (!clamped) {
          ++solver_checked;
          for (std::size_t i = 0; i < c.n(); ++i) {
            if ((sr.contents[i].hit_rate > sp.contents[i].hit_rate) != (hr[i] > hp[i])) ++solver_bad;
          }
        }
      }
    }
    const bool ok = t1 < kIdentityAbs && t2 < kIdentityAbs && pattern_bad == 0 && i0_bad == 0 && solver_bad == 0 &&
                    solver_checked > 0;
    return Outcome{ok, fmt::format("identical max|dh| {:.1e}; beta=1 max|dh| {:.1e}; i0 ={}; sign violations {}; "
                                   "i0 mismatches {}; solver disagreements {} over {} unclamped pairs",
                                   t1, t2, i0s, pattern_bad, i0_bad, solver_bad, solver_checked)};
  });

  criterion(4, "brute-force optimality", 30.0, [] {
    Catalog c;
    c.B = 1.5;
    c.contents = {{IrtModel::exponential(1.0), 1.0, 0},
                  {IrtModel::exponential(0.3), 2.0, 1},
                  {IrtModel::pareto(0.3, 0.7 / 0.5), 1.0, 2},
                  {IrtModel::pareto(0.45, 0.55 / 0.2), 1.5, 3}};
    double worst_excess = -1e300, worst_gap = 0.0;
    for (double beta : {0.8, 2.0}) {
      for (Mode m : {Mode::HRB, Mode::HPB}) {
        c.beta = beta;
        catalogs.push_back(c);
        const Catalog& cc = catalogs.back();
        const auto& s = solve_logged(cc, m);
        double opt = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
          const double x = m == Mode::HRB ? cc.contents[i].model.mean_rate() * s.contents[i].hit_prob
                                          : s.contents[i].hit_prob;
          opt += iso(beta, cc.contents[i].w, x);
        }
        // exhaustive grid over h in {0.001, ..., 0.999}^4: pairwise frontiers
        struct P {
          double cost, value;
        };
        std::vector<std::vector<double>> g(4), u(4);
        for (std::size_t i = 0; i < 4; ++i) {
          const auto& x = cc.contents[i];
          for (int k = 1; k < 1000; ++k) {
            const double h = k * 1e-3;
            g[i].push_back(x.model.age(x.model.quantile(h)));
            u[i].push_back(iso(beta, x.w, m == Mode::HRB ? x.model.mean_rate() * h : h));
          }
        }
        auto pairs = [&](std::size_t a, std::size_t b) {
          std::vector<P> v;
          v.reserve(999 * 999);
          for (std::size_t i = 0; i < 999; ++i) {
            for (std::size_t j = 0; j < 999; ++j) v.push_back({g[a][i] + g[b][j], u[a][i] + u[b][j]});
          }
          std::sort(v.begin(), v.end(), [](const P& l, const P& r) { return l.cost < r.cost; });
          for (std::size_t i = 1; i < v.size(); ++i) v[i].value = std::max(v[i].value, v[i - 1].value);
          return v;
        };
        const auto left = pairs(0, 1);
        const auto right = pairs(2, 3);
        double best = -1e300;
        for (const auto& p : left) {
          const double room = cc.B - p.cost;
          auto it = std::upper_bound(right.begin(), right.end(), room,
                                     [](double r, const P& q) { return r < q.cost; });
          if (it == right.begin()) break;
          best = std::max(best, p.value + std::prev(it)->value);
        }
        worst_excess = std::max(worst_excess, (best - opt) / std::fabs(opt));
        worst_gap = std::max(worst_gap, (opt - best) / std::fabs(opt));
      }
    }
    return Outcome{worst_excess <= 1e-9,
                   fmt::format("grid best exceeds optimum by at most {:.2e} (rel); optimum leads grid by <= {:.2e}",
                               worst_excess, worst_gap)};
  });

  criterion(2, "capacity", 0, [] {
    // add random mixed catalogs to the solutions gathered above
    Rng r(2024);
    for (int k = 0; k < 40; ++k) {
      Catalog c;
      const std::size_t n = 2 + r() % 60;
      c.beta = 0.3 + 3.0 * r.uniform();
      for (std::size_t i = 0; i < n; ++i) {
        const double mu = 0.01 + 2.0 * r.uniform();
        const double w = 0.1 + 3.0 * r.uniform();
        switch (r() % 4) {
          case 0: c.contents.push_back({IrtModel::exponential(mu), w, i}); break;
          case 1: c.contents.push_back({IrtModel::pareto(0.45 * r.uniform(), 1.0 / mu), w, i}); break;
          case 2: c.contents.push_back({IrtModel::hyperexponential({0.3, 0.7}, {mu, 3 * mu}), w, i}); break;
          default: c.contents.push_back({IrtModel::weibull(0.5 + 0.4 * r.uniform(), 1.0 / mu), w, i}); break;
        }
      }
      c.B = (0.05 + 0.9 * r.uniform()) * static_cast<double>(n);
      catalogs.push_back(c);
      solve_logged(catalogs.back(), Mode::HRB);
      solve_logged(catalogs.back(), Mode::HPB);
    }
    double worst = 0.0;
    for (const auto& [c, s] : solved) worst = std::max(worst, capacity_residual(*c, s));
    return Outcome{worst < kCapacityAbs, fmt::format("max |sum g(h) - B| = {:.2e} over {} solutions", worst, solved.size())};
  });

  criterion(5, "dual convergence, gamma 1e-5", 120.0, [] {
    const auto cat = zipf_exponential_catalog(1000, 0.8, 1.0, 100, 2.0, WeightRule::Rate);
    const auto opt = solve_cum(cat, Mode::HRB);
    AlgoParams p;
    p.gamma = 1e-5;
    auto run = run_controller(Algo::Dual, cat, p, 42, 1000000, 100000);
    const double err = max_relative_error(run.stats.implied_hit_rate, opt.hit_rates(), 100);
    const double mass = run.stats.mass_within(85, 115);
    AlgoParams hp = p;
    hp.mode = Mode::HPB;
    const auto hpb = run_controller(Algo::Dual, cat, hp, 42, 1000000, 100000);
    const double hpb_err = max_relative_error(hpb.stats.implied_hit_rate, solve_cum(cat, Mode::HPB).hit_rates(), 100);
    return Outcome{err < kConvergenceRel && mass >= kHistogramMass,
                   fmt::format("HRB top-100 max rel error {:.4f} (< {}); occupancy mass in [85,115] {:.3f} (>= {}); "
                               "mean occupancy {:.1f}; info: HPB top-100 error {:.4f}",
                               err, kConvergenceRel, mass, kHistogramMass, run.stats.mean_occupancy, hpb_err)};
  });

  criterion(6, "HRB vs HPB at gamma 1e-3", 0, [] {
    const auto cat = zipf_exponential_catalog(1000, 0.8, 1.0, 100, 2.0, WeightRule::Rate);
    double err[2];
    int k = 0;
    for (Mode m : {Mode::HRB, Mode::HPB}) {
      AlgoParams p;
      p.gamma = 1e-3;
      p.mode = m;
      auto run = run_controller(Algo::Dual, cat, p, 42, 1000000, 100000);
      err[k++] = max_relative_error(run.stats.implied_hit_rate, solve_cum(cat, m).hit_rates(), 100);
    }
    return Outcome{err[0] < kConvergenceRel && err[1] >= kConvergenceRel,
                   fmt::format("top-100 max rel error HRB {:.4f}, HPB {:.4f}", err[0], err[1])};
  });

  criterion(7, "stability of the dual recursion", 0, [] {
    const double W = 1, B = 100, eta_star = W / B, thr = poisson_threshold(W, B);
    const auto lo = simulate_recursion(1.01 * eta_star, 0.5 * thr, W, B, 20000);
    const auto hi = simulate_recursion(1.01 * eta_star, 4.0 * thr, W, B, 20000);
    const bool rec_ok = lo.verdict == Verdict::Converged && hi.verdict != Verdict::Converged;

    double mult_err = 0.0;
    for (double gh : {0.2, 0.7, 1.3, 1.9, 3.0}) {
      const double gamma = gh * W / (B * B);
      const double eps = 1e-7 * eta_star;
      const double next = eta_star + eps + gamma * (W / (eta_star + eps) - B);
      mult_err = std::max(mult_err, std::fabs((next - eta_star) / eps - (1 - gamma * B * B / W)));
    }

    // Lyapunov decrease claim at gamma = 1e-4 on 100 points in (0, eta*)
    int positive = 0;
    double min_dv = 1e300, min_at = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double eta = eta_star * i / 101.0;
      const double dv = dual_fn_and_delta_v(eta, W, B, 1e-4).delta_v;
      positive += dv > 0;
      if (dv < min_dv) {
        min_dv = dv;
        min_at = eta;
      }
    }

    // gamma_hat*_2 against plain bisection on e^z - 1 - 2z
    double a = 0.1, b = 5.0;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (a + b);
      (std::exp(m) - 1 - 2 * m < 0 ? a : b) = m;
    }
    const double oracle = 0.5 * (a + b);
    const double gs = gamma_star_schedule(2.0);
    const bool gs_ok = std::fabs(gs - kGammaHatStar2) < kGammaHatAbs && std::fabs(gs - oracle) < 1e-10;

    return Outcome{rec_ok && mult_err < kMultiplierAbs && positive == 100 && gs_ok,
                   fmt::format("recursion 0.5x: {}, 4x: {}; multiplier error {:.1e}; dV>0 at {}/100 points below eta* "
                               "(min {:.3e} at eta={:.4g}); gamma_hat*_2 = {:.6f} (bisection {:.6f})",
                               verdict_name(lo.verdict), verdict_name(hi.verdict), mult_err, positive, min_dv, min_at,
                               gs, oracle)};
  });

  criterion(8, "MMPP limits", 0, [] {
    const double a12 = 5, a21 = 2;
    auto limit_error = [&](double t1, double t2) {
      const auto h = mmpp2_to_h2(t1, t2, a12 * 1e-9, a21 * 1e-9);
      const double q_lo = t1 < t2 ? a21 * t1 / (a21 * t1 + a12 * t2) : a12 * t2 / (a21 * t1 + a12 * t2);
      return std::max({std::fabs(h.u1 - std::min(t1, t2)), std::fabs(h.u2 - std::max(t1, t2)), std::fabs(h.q1 - q_lo),
                       std::fabs(h.q2 - (1 - q_lo))});
    };
    // separated phase pairs: unit-scale rates and MMPP benchmark contents 1 and 10
    const auto p1 = zipf_popularity(1000, 0.4).probabilities;
    const auto p2 = zipf_popularity(1000, 0.8).probabilities;
    const std::vector<std::pair<double, double>> phases{{0.05, 0.01}, {2.0, 0.5}, {p1[0], p2[0]}, {p1[9], p2[9]}};
    double lim_err = 0.0;
    for (const auto& [t1, t2] : phases) lim_err = std::max(lim_err, limit_error(t1, t2));
    // all MMPP benchmark contents, reported only
    double table_worst = 0.0;
    std::size_t table_at = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const double e = limit_error(p1[i], p2[i]);
      if (e > table_worst) {
        table_worst = e;
        table_at = i + 1;
      }
    }

    double min_p = 1.0;
    std::uint64_t seed = 100;
    for (const auto& [t1, t2] : phases) {
      const auto m = IrtModel::mmpp2(t1, t2, a12 * 1e9, a21 * 1e9);
      const double mu = (t1 * a21 + t2 * a12) / (a12 + a21);
      const auto s = sample_stream(m, seed++, 5000.0 / mu);
      std::vector<double> irts;
      double prev = 0.0;
      for (double t : s.times) {
        irts.push_back(t - prev);
        prev = t;
      }
      min_p = std::min(min_p, ks_test(irts, [mu](double t) { return 1.0 - std::exp(-mu * t); }).p_value);
    }
    return Outcome{lim_err < kLimitAbs && min_p > kKsLevel,
                   fmt::format("x=1e-9 max |H2 - limit| {:.1e} over {} phase pairs; x=1e9 min KS p-value {:.3f}; "
                               "info: worst over all MMPP benchmark contents {:.1e} at content {} (near-equal phase rates)",
                               lim_err, phases.size(), min_p, table_worst, table_at)};
  });

  criterion(9, "MMPP benchmark aggregate hit rates", 600.0, [] {
    const double ref[2][3] = {{0.1591, 0.1612, 0.1655}, {0.1474, 0.1427, 0.1540}};
    const Algo algos[3] = {Algo::Dual, Algo::DualPoisson, Algo::OnlinePoisson};
    MmppWorkload setup;
    bool ok = true;
    std::string detail;
    int row = 0;
    for (double x : {1e-3, 1e-7}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto cat = mmpp_workload_catalog(setup, x);
      for (int a = 0; a < 3; ++a) {
        AlgoParams p;
        p.gamma = 1e-5;
        p.eta0 = 1.0;
        auto run = run_controller(algos[a], cat, p, 7, 1000000, 100000);
        const double v = aggregate_implied(run.stats);
        const bool in = std::fabs(v / ref[row][a] - 1) <= kMmppRateRel;
        ok &= in;
        detail += fmt::format("{}x={:.0e} {} {:.4f} vs {:.4f}{}", detail.empty() ? "" : "; ", x, algo_name(algos[a]), v,
                              ref[row][a], in ? "" : " OUT");
      }
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (s > 300.0) ok = false;
      ++row;
    }
    return Outcome{ok, detail};
  });

  criterion(10, "LRU fidelity", 0, [] {
    const auto cat = zipf_exponential_catalog(1000, 0.8, 1.0, 100, 1.0, WeightRule::Unit);
    const Trace tr = synth_trace(cat, 11, 1000000);
    SimOptions o;
    o.max_requests = tr.size();
    o.warmup_fraction = 0.0;
    o.record_hit_sequence = true;
    VectorEventSource s1(tr.records);
    const auto lru = simulate_replacement(Policy::LRU, s1, 1000, 100, 1, o);
    LruDualController ctl(100, 1e-7, 1.0 / 100);
    VectorEventSource s2(tr.records);
    const auto ttl = simulate_ttl(s2, 1000, ctl, o);
    const auto e =
        windowed_relative_error(window_hit_counts(ttl.hit_sequence, 3000), window_hit_counts(lru.hit_sequence, 3000));
    const double mean_err = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());

    const double T = characteristic_time(cat, 100);
    CatalogEventSource src(cat, 1);
    SimOptions lo;
    lo.max_requests = 5000000;
    const auto big = simulate_replacement(Policy::LRU, src, 1000, 100, 1, lo);
    double che = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      const double h = 1 - std::exp(-cat.contents[i].model.mean_rate() * T);
      che = std::max(che, std::fabs(big.hit_prob(i) / h - 1));
    }
    return Outcome{mean_err < kWindowedError && che < kCheRel,
                   fmt::format("mean windowed error {:.4f}; T = {:.3f}, top-50 max rel error {:.4f}", mean_err, T, che)};
  });

  criterion(11, "online Poisson vs LRU utility", 0, [] {
    const double beta = 2.0;
    const auto base = zipf_pareto_catalog(1000, 0.8, 1.0, 0.48, 100, beta, WeightRule::Unit);
    const Trace tr = synth_trace(base, 5, 1000000);
    const auto rates = tr.rates();
    SimOptions o;
    o.max_requests = tr.size();
    VectorEventSource s1(tr.records);
    const auto lru = simulate_replacement(Policy::LRU, s1, 1000, 100, 1, o);
    std::vector<double> lr(1000);
    for (std::size_t i = 0; i < 1000; ++i) lr[i] = lru.hit_rate(i);

    bool ok = true;
    std::string detail;
    for (auto kind : {WeightScheme::Kind::RateProportional, WeightScheme::Kind::RateInverse,
                      WeightScheme::Kind::UniformRandom}) {
      const WeightScheme ws{kind, 3};
      const auto w = ws.weights(rates);
      Catalog cat = base;
      auto pois = zipf_exponential_catalog(1000, 0.8, 1.0, 100, beta, WeightRule::Unit);
      for (std::size_t i = 0; i < 1000; ++i) cat.contents[i].w = pois.contents[i].w = w[i];
      OnlinePoissonController::Options op;
      op.eta0 = poisson_closed_form(pois, Mode::HRB).eta;
      op.gamma = 0.01 * beta * op.eta0 / 100;
      OnlinePoissonController ctl(cat, op);
      VectorEventSource s2(tr.records);
      const auto st = simulate_ttl(s2, 1000, ctl, o);
      std::vector<double> on(1000);
      for (std::size_t i = 0; i < 1000; ++i) on[i] = st.hit_rate(i);
      const auto rep = weighted_utility_report({"online-poisson", "lru"}, {on, lr}, 1, w, beta);
      ok &= rep[0].normalized > 1.0;
      detail += fmt::format("{}{} {:.3f}", detail.empty() ? "normalized utility " : ", ", ws.name(), rep[0].normalized);
    }
    return Outcome{ok, detail};
  });

  fmt::print("{} criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
