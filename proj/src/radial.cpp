#include "phidir/radial.hpp"

#include <cmath>

namespace phidir {

WarpedProduct WarpedProduct::euclidean(int n, double r_min, double r_max) {
  if (n < 2) throw std::invalid_argument("warped product needs n >= 2");
  if (!(0.0 < r_min && r_min < r_max))
    throw std::invalid_argument("need 0 < r_min < r_max");
  WarpedProduct m;
  m.n = n;
  m.k = 0.0;
  m.psi = [](double r) { return r; };
  m.psi_prime = [](double) { return 1.0; };
  m.r_min = r_min;
  m.r_max = r_max;
  m.kind = "euclidean";
  return m;
}

WarpedProduct WarpedProduct::hyperbolic(int n, double k, double r_min, double r_max) {
  if (n < 2) throw std::invalid_argument("warped product needs n >= 2");
  if (!(k > 0.0)) throw std::invalid_argument("hyperbolic warp needs k > 0");
  if (!(0.0 < r_min && r_min < r_max))
    throw std::invalid_argument("need 0 < r_min < r_max");
  WarpedProduct m;
  m.n = n;
  m.k = k;
  m.psi = [k](double r) { return std::sinh(k * r) / k; };
  m.psi_prime = [k](double r) { return std::cosh(k * r); };
  m.r_min = r_min;
  m.r_max = r_max;
  m.kind = "hyperbolic";
  return m;
}

WarpedProduct WarpedProduct::custom(int n, std::function<double(double)> psi,
                                    std::function<double(double)> psi_prime,
                                    double r_min, double r_max) {
  if (n < 2) throw std::invalid_argument("warped product needs n >= 2");
  if (!(0.0 < r_min && r_min < r_max))
    throw std::invalid_argument("need 0 < r_min < r_max");
  if (!psi) throw std::invalid_argument("custom warp needs psi");
  WarpedProduct m;
  m.n = n;
  m.psi = std::move(psi);
  m.psi_prime = std::move(psi_prime);
  m.r_min = r_min;
  m.r_max = r_max;
  for (double r : {r_min, 0.5 * (r_min + r_max), r_max})
    if (!(m.psi(r) > 0.0))
      throw std::invalid_argument("warp function must be positive on [r_min, r_max]");
  return m;
}

double WarpedProduct::psi_pow(double r) const {
  return std::pow(psi(r), n - 1);
}

double boundary_gap(const SymbolSpec& spec, const WarpedProduct& m, double c,
                    double tol) {
  if (c < 0.0) throw std::invalid_argument("boundary_gap takes c >= 0");
  if (c == 0.0) return 0.0;
  // r = r_min + L x^2 clusters nodes where the flux ratio peaks; this removes
  // the inverse-sqrt layer of saturating symbols (the slope behaves like
  // (r - r_min)^(-1/2) there, so the transformed integrand stays bounded)
  const double L = m.r_max - m.r_min;
  auto slope_x = [&](double x) {
    const double r = std::min(m.r_min + L * x * x, m.r_max);
    return inverse_a(spec, c / m.psi_pow(r)) * 2.0 * L * x;
  };
  return num::integrate(slope_x, 0.0, 1.0, tol).value;
}

RadialSolution solve_radial(const SymbolSpec& spec, const WarpedProduct& m,
                            double u_at_rmin, double u_at_rmax,
                            const RadialQuadConfig& cfg) {
  if (!m.psi || !(m.psi(m.r_min) > 0.0))
    throw std::invalid_argument("warp function must be positive on [r_min, r_max]");

  const double gap = u_at_rmax - u_at_rmin;
  const double sign = gap >= 0.0 ? 1.0 : -1.0;
  const double want = std::abs(gap);

  RadialSolution sol;
  sol.manifold = m;
  sol.u_at_rmin = u_at_rmin;
  sol.u_at_rmax = u_at_rmax;
  sol.quad_tol = cfg.tol;

  double c = 0.0;
  if (want > 0.0) {
    // psi is increasing on the built-ins, so the flux ratio peaks at r_min.
    const double psi_min = std::min(m.psi_pow(m.r_min), m.psi_pow(m.r_max));
    auto gap_of = [&](double cc) { return boundary_gap(spec, m, cc, cfg.tol); };
    double c_hi;
    if (std::isfinite(spec.sup_a)) {
      c_hi = spec.sup_a * psi_min * (1.0 - 1e-12);
      if (gap_of(c_hi) < want)
        throw no_radial_solution(
            "boundary gap " + std::to_string(want) +
            " exceeds the reachable gap " + std::to_string(gap_of(c_hi)) +
            " before flux saturation (" + spec.label + ")");
    } else {
      c_hi = 1.0;
      int guard = 0;
      while (gap_of(c_hi) < want) {
        c_hi *= 2.0;
        if (++guard > 500)
          throw no_radial_solution("boundary gap unreachable for " + spec.label);
      }
    }
    std::function<double(double)> f = gap_of;
    c = num::solve_increasing(f, 0.0, c_hi, want, 1e-15, nullptr,
                              cfg.tol * (1.0 + want));
  }
  sol.flux_c = sign * c;
  sol.boundary_residual = std::abs(boundary_gap(spec, m, c, cfg.tol) - want);

  const int N = std::max(cfg.table_nodes, 3);
  Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(N, m.r_min, m.r_max);
  Eigen::ArrayXd u(N), du(N);
  auto slope = [&](double rr) {
    return c == 0.0 ? 0.0 : sign * inverse_a(spec, c / m.psi_pow(rr));
  };
  u[0] = u_at_rmin;
  du[0] = slope(r[0]);
  const double seg_tol = cfg.tol / N;
  for (int i = 1; i < N; ++i) {
    u[i] = u[i - 1] + num::integrate(slope, r[i - 1], r[i], seg_tol).value;
    du[i] = slope(r[i]);
  }
  // pin the far end to the requested datum; spreads only quadrature roundoff
  const double drift = u_at_rmax - u[N - 1];
  for (int i = 1; i < N; ++i)
    u[i] += drift * (r[i] - m.r_min) / (m.r_max - m.r_min);
  sol.u = num::HermiteTable(std::move(r), std::move(u), std::move(du));
  return sol;
}

double evaluate_radial(const RadialSolution& sol, double r) {
  if (r < sol.manifold.r_min || r > sol.manifold.r_max)
    throw std::domain_error("evaluate_radial: r outside [r_min, r_max]");
  if (r == sol.manifold.r_min) return sol.u_at_rmin;
  if (r == sol.manifold.r_max) return sol.u_at_rmax;
  return sol.u(r);
}

// ---------------------------------------------------------------------------

namespace {

double barrier_integrand(const SymbolSpec& spec, int n, double k, double c,
                         double t) {
  const double arg = c * num::cosh_pow(k * t, 1.0 - n);
  return inverse_a(spec, std::min(arg, c));
}

}  // namespace

double asymptotic_g_value(const SymbolSpec& spec, int n, double k, double c,
                          double s, double tol) {
  if (c == 0.0) return 0.0;
  if (!(spec.q > 0.0))
    throw std::invalid_argument("asymptotic barrier needs the symbol's growth exponent q");
  auto f = [&](double t) { return barrier_integrand(spec, n, k, c, t); };
  const double rate = k / spec.q;  // integrand decays at least this fast past tau
  const double split = std::max(s, 1.0 / k);
  double head = s < split ? num::integrate(f, s, split, tol).value : 0.0;
  return head + num::integrate_to_infinity(f, split, rate, tol).value;
}

AsymptoticBarrier asymptotic_barrier(const SymbolSpec& spec, int n, double k,
                                     double height_C, double delta_small,
                                     double tol) {
  if (n < 2) throw std::invalid_argument("asymptotic barrier needs n >= 2");
  if (!(k > 0.0)) throw std::invalid_argument("asymptotic barrier needs k > 0");
  if (height_C < 0.0) throw std::invalid_argument("barrier height must be >= 0");

  AsymptoticBarrier bar;
  bar.spec = spec;
  bar.n = n;
  bar.k = k;
  bar.height_C = height_C;
  bar.quad_tol = tol;

  if (height_C == 0.0) {
    // trivial barrier: zero flux, g == 0
    Eigen::ArrayXd x(2), y(2), dy(2);
    x << 0.0, 1.0;
    y << 0.0, 0.0;
    dy << 0.0, 0.0;
    bar.g_table = num::HermiteTable(x, y, dy);
    bar.s_hi = 1.0;
    return bar;
  }

  if (!(spec.q > 0.0 && spec.delta_growth > 0.0))
    throw std::invalid_argument(
        "asymptotic barrier needs growth data (q, delta_growth) on the symbol");
  // the tail quadrature converges only under a(s) >= s^q near 0; check it
  for (double s = spec.delta_growth; s >= 1e-8; s *= 0.5)
    if (a_of(spec, s) < std::pow(s, spec.q) * (1.0 - 1e-12))
      throw std::domain_error(
          "growth bound a(s) >= s^q fails near 0: the barrier tail integral "
          "is not guaranteed to converge for " + spec.label);
  bar.q = spec.q;

  bar.paper_c = a_of(spec, 2.0 * height_C) / num::cosh_pow(k, n - 1.0);

  // Calibrate the flux constant so that g(0) >= 2C holds verifiably.
  const double target = 2.0 * height_C;
  auto g0 = [&](double c) { return asymptotic_g_value(spec, n, k, c, 0.0, tol); };
  double c = bar.paper_c;
  if (g0(c) < target) {
    double lo = c, hi;
    if (std::isfinite(spec.sup_a)) {
      // g(0) -> inf as c approaches the saturation value, so walk toward it
      double gap = spec.sup_a - lo;
      hi = lo;
      int guard = 0;
      do {
        gap *= 0.5;
        hi = spec.sup_a - gap;
        if (++guard > 200)
          throw std::domain_error("barrier calibration failed to bracket g(0) >= 2C");
      } while (g0(hi) < target);
    } else {
      hi = std::max(2.0 * lo, 1.0);
      int guard = 0;
      while (g0(hi) < target) {
        hi *= 2.0;
        if (++guard > 200)
          throw std::domain_error("barrier calibration failed to bracket g(0) >= 2C");
      }
    }
    std::function<double(double)> f = g0;
    c = num::solve_increasing(f, lo, hi, target * (1.0 + 1e-6), 1e-12, nullptr,
                              1e-8 * target);
    for (int bump = 0; g0(c) < target && bump < 60; ++bump)
      c = std::min(c * (1.0 + 1e-6), hi);
  }
  bar.calib_c = c;

  // delta with a(delta) < c, shrinking the requested strip if necessary
  double delta = std::min(delta_small > 0.0 ? delta_small : spec.delta_growth,
                          spec.delta_growth);
  if (a_of(spec, delta) >= c) delta = inverse_a(spec, 0.5 * c);
  bar.delta_small = delta;
  const double ratio = c / a_of(spec, delta);  // > 1 by construction
  bar.tau = std::acosh(std::pow(ratio, 1.0 / (n - 1.0))) / k;

  // table reach: past tau the tail obeys g(s) <= (2c)^(1/q) (q/k) e^(-ks/q)
  const double tail_scale = std::pow(2.0 * c, 1.0 / spec.q) * spec.q / k;
  double s_hi = bar.tau + spec.q / k * std::log(std::max(tail_scale / (1e-10 * height_C), 10.0));
  bar.s_hi = s_hi;

  auto f = [&](double t) { return barrier_integrand(spec, n, k, c, t); };
  const int N = 1024;
  Eigen::ArrayXd s(N + 1);
  s[0] = 0.0;
  s.tail(N) = num::log_space(std::min(1e-4 / k, s_hi * 1e-6), s_hi, N);
  Eigen::ArrayXd g(N + 1), dg(N + 1);
  g[N] = num::integrate_to_infinity(f, s[N], k / spec.q, tol).value;
  for (int i = N - 1; i >= 0; --i)
    g[i] = g[i + 1] + num::integrate(f, s[i], s[i + 1], tol / N).value;
  for (int i = 0; i <= N; ++i) dg[i] = -f(s[i]);
  bar.g_at_zero = g[0];
  bar.g_table = num::HermiteTable(std::move(s), std::move(g), std::move(dg));
  return bar;
}

double AsymptoticBarrier::g(double s) const {
  if (s < 0.0) throw std::domain_error("barrier profile: s must be >= 0");
  if (calib_c == 0.0) return 0.0;
  if (s <= s_hi) return g_table(s);
  auto f = [&](double t) { return barrier_integrand(spec, n, k, calib_c, t); };
  return num::integrate_to_infinity(f, s, k / q, quad_tol).value;
}

double AsymptoticBarrier::w(double s) const { return std::min(g(s), height_C); }

Eigen::ArrayXd asymptotic_residual(const AsymptoticBarrier& bar,
                                   const Eigen::ArrayXd& s_samples) {
  Eigen::ArrayXd out(s_samples.size());
  const double c = bar.calib_c;
  const double nk = (bar.n - 1) * c * bar.k;
  for (Eigen::Index i = 0; i < s_samples.size(); ++i) {
    const double z = bar.k * s_samples[i];
    if (!(z >= 0.0)) throw std::domain_error("residual samples must be > 0");
    double t1 = 0.0, t2 = 0.0;
    if (z < 300.0) {
      // two distinct evaluation paths so the cancellation is an actual check
      t1 = nk * num::cosh_pow(z, -static_cast<double>(bar.n)) * std::sinh(z);
      t2 = -nk * num::cosh_pow(z, 1.0 - bar.n) * std::tanh(z);
    }
    out[i] = t1 + t2;
  }
  return out;
}

}  // namespace phidir
