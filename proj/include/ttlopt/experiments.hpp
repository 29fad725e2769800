#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ttlopt/cache_sim.hpp"
#include "ttlopt/catalog.hpp"
#include "ttlopt/decentralized.hpp"
#include "ttlopt/online.hpp"
#include "ttlopt/solver.hpp"

namespace ttlopt {

enum class Algo { Dual, Primal, PrimalDual, OnlinePoisson, DualPoisson, LruDual };

std::string algo_name(Algo a);
Algo parse_algo(const std::string& s);

struct AlgoParams {
  Mode mode = Mode::HRB;
  double gamma = 1e-5;
  double rho = 1e-3;
  double eta0 = 1.0;  // <= 0 picks a per-algorithm default
  Estimator estimator = Estimator::Ewma;
  PenaltySpec penalty = PenaltySpec::blog();
};

std::unique_ptr<TimerController> make_controller(Algo algo, const Catalog& catalog, const AlgoParams& p);

/// Largest |a_i - ref_i| / ref_i over the first `top_k` entries.
double max_relative_error(const std::vector<double>& a, const std::vector<double>& ref, std::size_t top_k);

struct ControllerRun {
  SimStats stats;
  double final_eta = 0.0;
};

/// Runs `algo` on requests drawn from the catalog. Implied hit rates are
/// averaged over 100 snapshots of the last `window` requests.
ControllerRun run_controller(Algo algo, const Catalog& catalog, const AlgoParams& p, std::uint64_t seed,
                             std::size_t requests, std::size_t window, bool record_hits = false);

/// MMPP benchmark workload: 2-MMPP contents with Zipf(0.4)/Zipf(0.8) phase rates.
struct MmppWorkload {
  std::size_t n = 1000;
  double B = 100.0;
  double beta = 0.8;
  WeightRule weights = WeightRule::Unit;
  double a12 = 5.0;
  double a21 = 2.0;
  double total_rate = 1.0;
};

Catalog mmpp_workload_catalog(const MmppWorkload& s, double x);

}  // namespace ttlopt
