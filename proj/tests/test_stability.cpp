#include <doctest.h>

#include <cmath>

#include "ttlopt/catalog.hpp"
#include "ttlopt/error.hpp"
#include "ttlopt/solver.hpp"
#include "ttlopt/stability.hpp"

using namespace ttlopt;
using doctest::Approx;

namespace {

// Root of e^z - 1 - m z on z > 0 (z = (m-1) x) by plain bisection.
double schedule_oracle(double m) {
  auto f = [m](double z) { return std::exp(z) - 1 - m * z; };
  double lo = 1e-9, hi = 1e-9;
  if (m > 1) {
    while (f(hi) <= 0) hi *= 2;
  } else {
    lo = -1e-9;
    hi = -1e-9;
    while (f(lo) <= 0) lo *= 2;
    std::swap(lo, hi);
  }
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) < 0) == (f(lo) < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / (m - 1);
}

}  // namespace

TEST_CASE("dual function and one-step change") {
  const double W = 1, B = 100, eta_star = W / B;
  CHECK(dual_fn_and_delta_v(eta_star, W, B, 1e-4).delta_v == Approx(0.0).scale(1.0));
  for (int i = 1; i <= 100; ++i) {
    const double eta = eta_star * i / 40.0;
    CHECK(dual_fn(eta_star, W, B) <= dual_fn(eta, W, B) + 1e-15);
  }
  // closed form at eta*/2 in terms of gamma_hat = gamma B^2 / W
  for (double gh : {0.1, 0.9, 1.2, 1.3, 2.0}) {
    const double gamma = gh * W / (B * B);
    CHECK(dual_fn_and_delta_v(eta_star / 2, W, B, gamma).delta_v ==
          Approx(W * (gh - std::log(1 + 2 * gh))).epsilon(1e-9));
  }
  // near the equilibrium the sign follows gamma_hat (gamma_hat / 2 - 1)
  for (double gh : {0.5, 1.5, 2.5, 3.5}) {
    const double gamma = gh * W / (B * B);
    const double v = dual_fn_and_delta_v(eta_star * (1 - 1e-3), W, B, gamma).delta_v;
    CHECK((v > 0) == (gh > 2));
  }
  CHECK_THROWS_AS(dual_fn_and_delta_v(1.0, W, B, 1.0), DomainError);
}

TEST_CASE("thresholds") {
  CHECK(poisson_threshold(1, 100) == Approx(2e-4));
  CHECK(poisson_threshold(3, 100) == Approx(3 * poisson_threshold(1, 100)));
  CHECK(gamma_star_schedule(2) == Approx(1.2564).epsilon(1e-4));
  CHECK(gamma_star_schedule(2) == Approx(schedule_oracle(2)).epsilon(1e-10));
  for (double m : {0.1, 0.5, 0.9, 1.1, 1.5, 3.0, 10.0}) {
    const double r = gamma_star_schedule(m);
    CHECK(r > 0);
    CHECK(r == Approx(schedule_oracle(m)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(gamma_star_schedule(1.0), DomainError);

  const double W = 1, B = 100, s = gamma_star_schedule(2);
  CHECK(dual_fn_and_delta_v(0.005, W, B, 0.9 * s * W / (B * B)).delta_v < 0);
  CHECK(dual_fn_and_delta_v(0.005, W, B, 1.1 * s * W / (B * B)).delta_v > 0);
}

TEST_CASE("recursion verdicts") {
  const double W = 1, B = 100, eta_star = W / B, thr = poisson_threshold(W, B);
  auto fixed = simulate_recursion(eta_star, 3 * thr, W, B, 1000);
  for (double e : fixed.trajectory) CHECK(e == Approx(eta_star).epsilon(1e-15));

  auto ok = simulate_recursion(1.01 * eta_star, 0.5 * thr, W, B, 10000);
  CHECK(ok.verdict == Verdict::Converged);
  CHECK(std::fabs(ok.trajectory.back() - eta_star) < 1e-9);

  auto bad = simulate_recursion(1.01 * eta_star, 4 * thr, W, B, 10000);
  CHECK(bad.verdict != Verdict::Converged);

  for (double gh : {0.3, 1.0, 1.7, 3.0}) {
    const double gamma = gh * W / (B * B);
    const double eps = 1e-9 * eta_star;
    const double f = eta_star + eps + gamma * (W / (eta_star + eps) - B);
    CHECK((f - eta_star) / eps == Approx(1 - gh).epsilon(1e-3).scale(1.0));
  }

  auto sched = simulate_recursion(0.2 * eta_star, [&](double e) { return scheduled_gamma(e, W, B, 0.9); }, W, B, 5000);
  CHECK(sched.verdict == Verdict::Converged);
  CHECK_FALSE(sched.projected);
  CHECK(verdict_name(Verdict::Diverged) == "diverged");
}

TEST_CASE("pareto A* against a finite-difference sensitivity") {
  for (double k : {0.0, 0.2, 0.45}) {
    const double w = 1.5;
    Content c{IrtModel::pareto(k, 1.0), w, 0};
    for (double eta : {2.0, 5.0, 20.0}) {
      auto occ = [&](double e) { return c.model.age(y_inverse_point(c, 1.0, e, Mode::HRB).t); };
      const double d = 1e-6 * eta;
      const double sens = -(occ(eta + d) - occ(eta - d)) / (2 * d);
      const double x = y_inverse(c, 1.0, eta, Mode::HRB);
      CHECK(pareto_a_star(k, w, x) == Approx(sens).epsilon(1e-5));
    }
  }
}

TEST_CASE("pareto A* maximum") {
  for (double k : {0.1, 0.3, 0.49}) {
    double grid = 0.0;
    for (int i = 1; i < 10000; ++i) grid = std::max(grid, pareto_a_star(k, 1.0, i * 1e-4));
    CHECK(pareto_a_star_max(k, 1.0) >= grid - 1e-12);
    CHECK(pareto_a_star_max(k, 1.0) == Approx(grid).epsilon(1e-3));
  }
  // k = 0: A*(x) = x^2 / w, increasing towards 1/w
  CHECK(pareto_a_star(0.0, 2.0, 0.5) == Approx(0.125));
  CHECK(pareto_a_star_max(0.0, 2.0) == Approx(0.5));
  CHECK(pareto_a_star_max(0.5, 2.0) == Approx(0.25));
  CHECK(std::isinf(pareto_a_star_max(0.6, 1.0)));

  auto cat = zipf_pareto_catalog(100, 0.8, 1.0, 0.3, 10, 1.0, WeightRule::Unit);
  CHECK(pareto_threshold(cat) == Approx(2.0 / (100 * pareto_a_star_max(0.3, 1.0))));
  auto mixed = zipf_exponential_catalog(10, 0.8, 1.0, 2, 1.0, WeightRule::Unit);
  CHECK_THROWS_AS(pareto_threshold(mixed), InvalidInstance);
}
