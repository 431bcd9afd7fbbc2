#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phidir/numerics.hpp"

using namespace phidir;

TEST_CASE("adaptive quadrature on smooth integrands") {
  auto sq = [](double x) { return x * x; };
  CHECK(num::integrate(sq, 0.0, 1.0, 1e-13).value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  auto sine = [](double x) { return std::sin(x); };
  CHECK(num::integrate(sine, 0.0, M_PI, 1e-13).value == doctest::Approx(2.0).epsilon(1e-12));

  auto osc = [](double x) { return std::cos(20.0 * x) * std::exp(-x); };
  const double exact = (20.0 * std::sin(20.0) - std::cos(20.0)) * std::exp(-1.0) / 401.0 + 1.0 / 401.0;
  CHECK(num::integrate(osc, 0.0, 1.0, 1e-13).value == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("adaptive quadrature resolves a sharp boundary layer") {
  // int_0^1 x/sqrt(d + x^2) dx = sqrt(d+1) - sqrt(d)
  for (double d : {1e-4, 1e-8, 1e-12}) {
    auto f = [d](double x) { return x / std::sqrt(d + x * x); };
    const double exact = std::sqrt(d + 1.0) - std::sqrt(d);
    const auto res = num::integrate(f, 0.0, 1.0, 1e-12);
    CHECK(res.value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(res.evaluations < 100000);
  }
}

TEST_CASE("improper tail integration") {
  auto expdec = [](double t) { return std::exp(-t); };
  CHECK(num::integrate_to_infinity(expdec, 2.0, 1.0, 1e-13).value ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  // decay faster than the declared rate is fine
  auto fast = [](double t) { return std::exp(-3.0 * t); };
  CHECK(num::integrate_to_infinity(fast, 0.0, 1.0, 1e-13).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-11));

  CHECK_THROWS(num::integrate_to_infinity(expdec, 0.0, 0.0));
}

TEST_CASE("monotone root solving") {
  std::function<double(double)> cube = [](double x) { return x * x * x; };
  CHECK(num::solve_increasing(cube, 0.0, 3.0, 8.0) == doctest::Approx(2.0).epsilon(1e-12));
  std::function<double(double)> dcube = [](double x) { return 3.0 * x * x; };
  CHECK(num::solve_increasing(cube, 0.0, 3.0, 8.0, 1e-15, &dcube) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS(num::solve_increasing(cube, 0.0, 1.0, 8.0));

  std::function<double(double)> lin = [](double x) { return 2.0 * x; };
  CHECK(num::expand_upper(lin, 1.0, 10.0) >= 5.0);
  CHECK_THROWS(num::expand_upper(lin, 1.0, 1e20));
}

TEST_CASE("stable hyperbolic powers") {
  CHECK(num::log_cosh(0.0) == doctest::Approx(0.0));
  CHECK(num::log_cosh(1.0) == doctest::Approx(std::log(std::cosh(1.0))));
  CHECK(num::log_cosh(800.0) == doctest::Approx(800.0 - M_LN2));
  CHECK(num::cosh_pow(1.0, -2.0) ==
        doctest::Approx(1.0 / (std::cosh(1.0) * std::cosh(1.0))).epsilon(1e-14));
  CHECK(num::cosh_pow(800.0, -1.0) == 0.0);  // graceful underflow
}

TEST_CASE("hermite tables") {
  const int n = 33;
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(n, 0.0, 2.0);
  Eigen::ArrayXd y(n), dy(n);
  for (int i = 0; i < n; ++i) {
    y[i] = std::sin(x[i]);
    dy[i] = std::cos(x[i]);
  }
  num::HermiteTable t(x, y, dy);
  CHECK(t(0.0) == y[0]);  // endpoints exact
  CHECK(t(2.0) == y[n - 1]);
  for (double q : {0.13, 0.77, 1.31, 1.93})
    CHECK(t(q) == doctest::Approx(std::sin(q)).epsilon(1e-7));
  CHECK_THROWS(t(-0.1));
  CHECK_THROWS(t(2.1));

  Eigen::ArrayXd bad = x;
  bad[3] = bad[2];
  CHECK_THROWS(num::HermiteTable(bad, y, dy));
}

TEST_CASE("log-spaced grids hit both ends") {
  Eigen::ArrayXd g = num::log_space(1e-3, 1e6, 128);
  CHECK(g[0] == 1e-3);
  CHECK(g[127] == 1e6);
  for (int i = 1; i < 128; ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS(num::log_space(0.0, 1.0, 8));
  CHECK_THROWS(num::log_space(1.0, 0.5, 8));
}
