#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phidir/barrier.hpp"

using namespace phidir;

TEST_CASE("alpha_of") {
  CHECK(alpha_of(2.0, 1.0, 0.2) == 2.0);
  CHECK(alpha_of(0.1, 1.0, 0.0) == 1.0);
  CHECK(alpha_of(1.0, 10.0, 2.0) == 6.0);
}

TEST_CASE("mild profile against the closed-form beta") {
  // phi(s) = s^2: the height integrand is the constant (2/3)^2/C,
  // so beta = alpha + 9 C M / 4
  DomainGeometry geom;
  geom.delta0 = 1.0;
  geom.c1 = 0.0;
  geom.C_geom = 2.0;
  const double M = 1.5;
  const BarrierProfile prof =
      build_profile(BarrierRegime::mild, {1.0, 2.0}, geom, M);

  const double alpha = 1.5;  // max{M/delta0, 1, 0}
  const double beta = alpha + 9.0 * geom.C_geom * M / 4.0;
  CHECK(prof.alpha == doctest::Approx(alpha));
  CHECK(prof.beta == doctest::Approx(beta).epsilon(1e-10));

  const double delta = 4.0 / (9.0 * geom.C_geom) * std::log(beta / alpha);
  CHECK(prof.delta == doctest::Approx(delta).epsilon(1e-10));

  CHECK(eval_profile(prof, 0.0) == 0.0);
  CHECK(std::abs(eval_profile(prof, prof.delta) - M) <= 1e-8);
  CHECK(prof.delta <= M / prof.alpha + 1e-12);
  CHECK(M / prof.alpha <= geom.delta0 + 1e-12);

  // closed-form f at interior depths: d(s) = (4/9C) ln(beta/s),
  // f(s) = (4/9C)(beta - s); eliminate s
  for (double frac : {0.25, 0.5, 0.75}) {
    const double d = frac * prof.delta;
    const double s = beta * std::exp(-d * 9.0 * geom.C_geom / 4.0);
    const double f_exact = 4.0 / (9.0 * geom.C_geom) * (beta - s);
    CHECK(eval_profile(prof, d) == doctest::Approx(f_exact).epsilon(1e-9));
    CHECK(profile_slope(prof, d) == doctest::Approx(s).epsilon(1e-9));
  }
}

TEST_CASE("strong profile against the closed-form beta") {
  // constant phi = gamma: f(delta) = (gamma/C) ln(beta/alpha),
  // so beta = alpha exp(C M / gamma)
  DomainGeometry geom;
  geom.delta0 = 2.0;
  geom.c1 = 0.1;
  geom.C_geom = 1.0;
  geom.mean_convex = true;
  const double gamma = 0.5, M = 1.0;
  const BarrierProfile prof =
      build_profile(BarrierRegime::strong, {gamma, 0.0}, geom, M);

  CHECK(prof.alpha == doctest::Approx(1.0));  // max{0.5, 1, 0.3}
  CHECK(prof.beta == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
  const double delta = gamma / geom.C_geom * (1.0 / prof.alpha - 1.0 / prof.beta);
  CHECK(prof.delta == doctest::Approx(delta).epsilon(1e-10));
  CHECK(std::abs(eval_profile(prof, prof.delta) - M) <= 1e-8);
  CHECK(prof.delta <= M / prof.alpha + 1e-12);
}

TEST_CASE("slope endpoints and concavity") {
  DomainGeometry geom;
  geom.delta0 = 1.0;
  geom.c1 = 0.3;
  geom.C_geom = 8.0;
  const BarrierProfile prof =
      build_profile(BarrierRegime::mild, {1.0, 2.0}, geom, 2.0);

  CHECK(profile_slope(prof, prof.delta) == doctest::Approx(prof.alpha));
  CHECK(profile_slope(prof, 0.0) == doctest::Approx(prof.beta));

  // f' = slope decreasing in d (concavity), f increasing with f(d) in (0, M)
  double prev_slope = std::numeric_limits<double>::infinity();
  double prev_f = -1.0;
  for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double d = frac * prof.delta;
    const double sl = profile_slope(prof, d);
    const double f = eval_profile(prof, d);
    CHECK(sl < prev_slope);
    CHECK(f > prev_f);
    CHECK(f > 0.0);
    CHECK(f < prof.M);
    prev_slope = sl;
    prev_f = f;
  }
}

TEST_CASE("certificate residuals vanish for the constructed profile") {
  DomainGeometry mild_geom;
  mild_geom.delta0 = 1.0;
  mild_geom.c1 = 0.0;
  mild_geom.C_geom = 2.0;
  const BarrierProfile mild =
      build_profile(BarrierRegime::mild, {1.0, 2.0}, mild_geom, 1.0);

  DomainGeometry strong_geom = mild_geom;
  strong_geom.mean_convex = true;
  const BarrierProfile strong =
      build_profile(BarrierRegime::strong, {0.5, 0.0}, strong_geom, 1.0);

  for (const BarrierProfile* prof : {&mild, &strong}) {
    Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(100, prof->alpha, prof->beta);
    const Eigen::ArrayXd res = profile_residual(*prof, s);
    for (Eigen::Index i = 0; i < res.size(); ++i)
      CHECK(std::abs(res[i]) <= 1e-9);

    // scaling f'' past one gives a strict supersolution
    const Eigen::ArrayXd strict = profile_residual(*prof, s, 1.1);
    for (Eigen::Index i = 0; i < strict.size(); ++i) CHECK(strict[i] < 0.0);
  }
}

TEST_CASE("the text's constant placement fails its own certificate") {
  DomainGeometry geom;
  geom.delta0 = 2.0;
  geom.c1 = 0.0;
  geom.C_geom = 2.0;
  geom.mean_convex = true;
  BarrierBuildOptions opt;
  opt.placement = StrongPlacement::multiply_by_C;
  const BarrierProfile prof =
      build_profile(BarrierRegime::strong, {1.0, 0.0}, geom, 1.0, opt);
  Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(10, prof.alpha, prof.beta);
  const Eigen::ArrayXd res = profile_residual(prof, s);
  // residual is C - 1/C instead of zero
  for (Eigen::Index i = 0; i < res.size(); ++i)
    CHECK(res[i] == doctest::Approx(geom.C_geom - 1.0 / geom.C_geom));
}

TEST_CASE("lower barrier is the negation") {
  DomainGeometry geom;
  geom.delta0 = 1.0;
  geom.c1 = 0.0;
  geom.C_geom = 4.0;
  const BarrierProfile up = build_profile(BarrierRegime::mild, {1.0, 2.0}, geom, 1.0);
  const BarrierProfile low = lower_profile(up);
  for (double frac : {0.0, 0.2, 0.6, 1.0}) {
    const double d = frac * up.delta;
    CHECK(eval_profile(low, d) == doctest::Approx(-eval_profile(up, d)));
  }
}

TEST_CASE("degenerate height") {
  DomainGeometry geom;
  geom.delta0 = 1.0;
  geom.c1 = 0.0;
  geom.C_geom = 1.0;
  const BarrierProfile prof = build_profile(BarrierRegime::mild, {1.0, 2.0}, geom, 0.0);
  CHECK(prof.delta == 0.0);
  CHECK(prof.beta == prof.alpha);
  CHECK(eval_profile(prof, 0.0) == 0.0);
  CHECK_THROWS(eval_profile(prof, 0.1));
}

TEST_CASE("regime prerequisites are enforced") {
  DomainGeometry geom;
  geom.delta0 = 1.0;
  geom.c1 = 0.0;
  geom.C_geom = 1.0;
  // mild needs m >= 1
  CHECK_THROWS(build_profile(BarrierRegime::mild, {1.0, 0.0}, geom, 1.0));
  // strong needs a constant minorant and mean convexity
  CHECK_THROWS(build_profile(BarrierRegime::strong, {1.0, 1.0}, geom, 1.0));
  geom.mean_convex = false;
  CHECK_THROWS(build_profile(BarrierRegime::strong, {1.0, 0.0}, geom, 1.0));
  geom.mean_convex = true;
  CHECK_NOTHROW(build_profile(BarrierRegime::strong, {1.0, 0.0}, geom, 1.0));
  // evaluation domain
  const BarrierProfile prof = build_profile(BarrierRegime::mild, {1.0, 2.0}, geom, 1.0);
  CHECK_THROWS(eval_profile(prof, -0.1));
  CHECK_THROWS(eval_profile(prof, prof.delta * 1.01));
}

TEST_CASE("beta search overflow guard") {
  DomainGeometry geom;
  geom.delta0 = 2.0;
  geom.c1 = 0.0;
  geom.C_geom = 1.0;
  geom.mean_convex = true;
  // beta = alpha exp(C M / gamma) blows past any finite guard for tiny gamma
  CHECK_THROWS_AS(build_profile(BarrierRegime::strong, {1e-12, 0.0}, geom, 1.0),
                  std::domain_error);
}
