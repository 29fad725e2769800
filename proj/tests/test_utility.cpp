#include <doctest.h>

#include <boost/math/special_functions/expint.hpp>
#include <cmath>

#include "ttlopt/error.hpp"
#include "ttlopt/utility.hpp"

using namespace ttlopt;
using doctest::Approx;

TEST_CASE("isoelastic utility values") {
  CHECK(utility({1.0, 2.0}, std::exp(1.0)) == Approx(2.0).epsilon(1e-15));
  CHECK(utility({0.0, 3.0}, 5.0) == Approx(15.0));
  CHECK(utility({2.0, 1.0}, 4.0) == Approx(-0.25));
  CHECK(utility_prime_inv({2.0, 1.0}, 4.0) == Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(utility_prime_inv({0.0, 1.0}, 4.0), DomainError);
  auto p = beta_utility({0.8, 1.5}, 0.3);
  CHECK(p.U == Approx(utility({0.8, 1.5}, 0.3)));
  CHECK(p.U_prime == Approx(utility_prime({0.8, 1.5}, 0.3)));
}

TEST_CASE("utility derivative and inverse") {
  for (double beta : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    for (double x : {0.01, 0.3, 2.0}) {
      const UtilitySpec s{beta, 1.7};
      const double d = 1e-6 * x;
      CHECK(utility_prime(s, x) == Approx((utility(s, x + d) - utility(s, x - d)) / (2 * d)).epsilon(1e-6));
      if (beta > 0.0) CHECK(utility_prime_inv(s, utility_prime(s, x)) == Approx(x).epsilon(1e-12));
    }
  }
}

TEST_CASE("logarithmic integral against the exponential integral") {
  CHECK(li(0.0) == 0.0);
  CHECK(li(2.0) == Approx(1.04516378).epsilon(1e-8));
  CHECK(li(0.5) == Approx(-0.37867104).epsilon(1e-8));
  CHECK_THROWS_AS(li(1.0), SingularError);
  for (double x : {1e-12, 1e-5, 0.01, 0.2, 0.9, 0.999, 1.001, 1.5, 10.0, 1e3, 1e8, 1e20}) {
    CHECK(li(x) == Approx(boost::math::expint(std::log(x))).epsilon(1e-12));
  }
}

TEST_CASE("lru utility") {
  CHECK(lru_utility(1.0, 1.0) == 0.0);
  CHECK(lru_utility(2.0, 0.75) == Approx(2.0 * li(0.5)).epsilon(1e-14));
  CHECK(lru_utility(2.0, 0.75) == Approx(-0.75734).epsilon(1e-5));
  CHECK_THROWS_AS(lru_utility(1.0, 0.0), SingularError);
}
