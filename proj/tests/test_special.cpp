#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fdg/linalg.hpp"
#include "fdg/quadrature.hpp"
#include "fdg/special.hpp"
#include "oracle.hpp"

using namespace fdg;

TEST_CASE("gamma_fn matches boost over positive and negative arguments") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.05, 20.0), neg(-6.0, 0.0);
  for (int i = 0; i < 200; ++i) {
    const double x = pos(rng);
    CHECK(gamma_fn(x) == doctest::Approx(oracle::gamma(x)).epsilon(1e-13));
    double y = neg(rng);
    if (std::abs(y - std::round(y)) < 1e-3) y += 0.01;
    CHECK(gamma_fn(y) == doctest::Approx(oracle::gamma(y)).epsilon(1e-12));
  }
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("sin_pi, binomial, factorial") {
  CHECK(sin_pi(3.0) == 0.0);
  CHECK(sin_pi(0.5) == doctest::Approx(1.0));
  CHECK(sin_pi(-0.8) == doctest::Approx(std::sin(-0.8 * M_PI)));
  CHECK(binomial(5, 2) == 10.0);
  CHECK(binomial(4, 0) == 1.0);
  CHECK(factorial(6) == 720.0);
  CHECK(is_nonpositive_integer(-2.0));
  CHECK_FALSE(is_nonpositive_integer(-2.5));
}

TEST_CASE("gauss_legendre integrates degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 16, 40, kMaxGaussOrder}) {
    const auto& g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    for (int d = 0; d <= 2 * n - 1; d += std::max(1, n / 4)) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS(gauss_legendre(0));
  CHECK_THROWS(gauss_legendre(kMaxGaussOrder + 1));
}

TEST_CASE("gauss_order_for_gap grows as the singularity approaches") {
  const int far = gauss_order_for_gap(10.0, 1.0);
  const int near = gauss_order_for_gap(0.01, 1.0);
  CHECK(far >= 2);
  CHECK(near > far);
  CHECK(near <= kMaxGaussOrder);
}

TEST_CASE("tridiagonal apply and banded LU") {
  Tridiagonal t;
  t.diag = {4, 4, 4, 4};
  t.lower = {1, 1, 1};
  t.upper = {-1, -1, -1};
  std::vector<double> x{1, 2, 3, 4}, y(4);
  t.apply(x, y);
  CHECK(y[0] == doctest::Approx(4 - 2));
  CHECK(y[1] == doctest::Approx(1 + 8 - 3));
  CHECK(y[3] == doctest::Approx(3 + 16));
  CHECK(t(1, 0) == 1.0);
  CHECK(t(0, 1) == -1.0);
  CHECK(t(0, 3) == 0.0);

  BandedLU lu(4, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    lu.at(i, i) = 4;
    if (i > 0) lu.at(i, i - 1) = 1;
    if (i + 1 < 4) lu.at(i, i + 1) = -1;
  }
  lu.factorize();
  lu.solve(y);
  for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));

  BandedLU sing(2, 1);
  CHECK_THROWS_AS(sing.factorize(), std::runtime_error);
}
