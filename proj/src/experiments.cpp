#include "ttlopt/experiments.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

#include "ttlopt/catalog_io.hpp"
#include "ttlopt/error.hpp"

namespace ttlopt {

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::Dual:
      return "dual";
    case Algo::Primal:
      return "primal";
    case Algo::PrimalDual:
      return "primal-dual";
    case Algo::OnlinePoisson:
      return "online-poisson";
    case Algo::DualPoisson:
      return "dual-poisson";
    case Algo::LruDual:
      return "lru-dual";
  }
  return "?";
}

Algo parse_algo(const std::string& s) {
  for (Algo a : {Algo::Dual, Algo::Primal, Algo::PrimalDual, Algo::OnlinePoisson, Algo::DualPoisson, Algo::LruDual}) {
    if (algo_name(a) == s) return a;
  }
  throw InvalidInstance(fmt::format("unknown algorithm '{}'", s));
}

std::unique_ptr<TimerController> make_controller(Algo algo, const Catalog& catalog, const AlgoParams& p) {
  double total_rate = 0.0;
  for (const auto& c : catalog.contents) total_rate += c.model.mean_rate();
  switch (algo) {
    case Algo::Dual:
      return std::make_unique<DualController>(catalog, p.mode, p.gamma, p.eta0 > 0.0 ? p.eta0 : 1.0);
    case Algo::Primal:
      return std::make_unique<PrimalController>(catalog, p.mode, p.penalty, p.rho);
    case Algo::PrimalDual:
      return std::make_unique<PrimalDualController>(catalog, p.mode, p.gamma, p.rho, p.eta0 > 0.0 ? p.eta0 : 1.0);
    case Algo::OnlinePoisson:
    case Algo::DualPoisson: {
      OnlinePoissonController::Options o;
      o.gamma = p.gamma;
      o.eta0 = p.eta0 > 0.0 ? p.eta0 : 1.0;
      o.estimator = p.estimator;
      o.oracle_rates = algo == Algo::DualPoisson;
      return std::make_unique<OnlinePoissonController>(catalog, o);
    }
    case Algo::LruDual:
      // Default start: T = B / total rate.
      return std::make_unique<LruDualController>(catalog.B, p.gamma, p.eta0 > 0.0 ? p.eta0 : total_rate / catalog.B);
  }
  throw InvalidInstance("unknown algorithm");
}

double max_relative_error(const std::vector<double>& a, const std::vector<double>& ref, std::size_t top_k) {
  double worst = 0.0;
  const std::size_t k = std::min({top_k, a.size(), ref.size()});
  for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::fabs(a[i] - ref[i]) / ref[i]);
  return worst;
}

ControllerRun run_controller(Algo algo, const Catalog& catalog, const AlgoParams& p, std::uint64_t seed,
                             std::size_t requests, std::size_t window, bool record_hits) {
  auto ctl = make_controller(algo, catalog, p);
  CatalogEventSource src(catalog, seed);
  SimOptions opt;
  opt.max_requests = requests;
  opt.record_hit_sequence = record_hits;
  opt.trajectory_stride = std::max<std::size_t>(1, requests / 1000);
  opt.implied_catalog = &catalog;
  opt.implied_window = window;
  opt.implied_snapshots = window > 0 ? 100 : 0;
  ControllerRun run;
  run.stats = simulate_ttl(src, catalog.n(), *ctl, opt);
  run.final_eta = ctl->eta();
  return run;
}

Catalog mmpp_workload_catalog(const MmppWorkload& s, double x) {
  return zipf_mmpp_catalog(s.n, 0.4, 0.8, s.total_rate, s.a12, s.a21, x, s.B, s.beta, s.weights);
}

}  // namespace ttlopt
