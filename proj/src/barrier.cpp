#include "phidir/barrier.hpp"

#include <cmath>
#include <stdexcept>

namespace phidir {

double alpha_of(double M, double delta0, double c1) {
  if (!(M >= 0.0) || !(delta0 > 0.0) || c1 < 0.0)
    throw std::invalid_argument("alpha_of: need M >= 0, delta0 > 0, c1 >= 0");
  return std::max({M / delta0, 1.0, 3.0 * c1});
}

namespace {

// integrand of the height map f(delta) = int_alpha^beta w_f, and of the
// depth map h(s) = int_s^beta w_h
struct Weights {
  const BarrierProfile& p;
  double wf(double t) const {
    const double phi = p.minorant(p.regime == BarrierRegime::mild ? 2.0 * t / 3.0
                                                                  : 4.0 * t / 3.0);
    if (p.regime == BarrierRegime::mild) return phi / (p.C_geom * t * t);
    return p.placement == StrongPlacement::divide_by_C ? phi / (p.C_geom * t)
                                                       : p.C_geom * phi / t;
  }
  double wh(double t) const {
    return wf(t) / t;
  }
};

}  // namespace

BarrierProfile build_profile(BarrierRegime regime, const PowerMinorant& phi,
                             const DomainGeometry& geom, double M,
                             const BarrierBuildOptions& opt) {
  if (!(phi.c > 0.0)) throw std::invalid_argument("barrier minorant needs c > 0");
  if (M < 0.0) throw std::invalid_argument("barrier height M must be >= 0");
  if (!(geom.C_geom > 0.0) || !(geom.delta0 > 0.0) || geom.c1 < 0.0)
    throw std::invalid_argument("barrier geometry constants must be positive");
  if (regime == BarrierRegime::mild && phi.m < 1.0)
    throw std::invalid_argument(
        "mild barrier needs a minorant with m >= 1 (divergent integral of phi/s^2)");
  if (regime == BarrierRegime::strong) {
    if (phi.m != 0.0)
      throw std::invalid_argument(
          "strong barrier needs a constant minorant (divergent integral of phi/s)");
    if (!geom.mean_convex)
      throw std::invalid_argument("strong barrier requires a mean convex strip");
  }

  BarrierProfile prof;
  prof.regime = regime;
  prof.minorant = phi;
  prof.C_geom = geom.C_geom;
  prof.placement = opt.placement;
  prof.M = M;
  prof.alpha = alpha_of(M, geom.delta0, geom.c1);

  if (M == 0.0) {
    prof.beta = prof.alpha;
    prof.delta = 0.0;
    return prof;  // degenerate profile, f == 0
  }

  Weights w{prof};
  auto height = [&](double beta) {
    return num::integrate([&](double t) { return w.wf(t); }, prof.alpha, beta,
                          opt.quad_tol)
        .value;
  };
  std::function<double(double)> h_fn = height;
  const double hi = num::expand_upper(h_fn, 2.0 * prof.alpha, M, opt.beta_guard);
  prof.beta = num::solve_increasing(h_fn, prof.alpha, hi, M, 1e-15, nullptr,
                                    1e-12 * (1.0 + M));

  const int N = std::max(opt.table_nodes, 3);
  Eigen::ArrayXd s = num::log_space(prof.alpha, prof.beta, N);
  Eigen::ArrayXd hv(N), fv(N), dh(N), df(N);
  hv[N - 1] = 0.0;
  fv[N - 1] = 0.0;
  const double seg_tol = opt.quad_tol / N;
  for (int i = N - 2; i >= 0; --i) {
    hv[i] = hv[i + 1] +
            num::integrate([&](double t) { return w.wh(t); }, s[i], s[i + 1], seg_tol).value;
    fv[i] = fv[i + 1] +
            num::integrate([&](double t) { return w.wf(t); }, s[i], s[i + 1], seg_tol).value;
  }
  for (int i = 0; i < N; ++i) {
    dh[i] = -w.wh(s[i]);
    df[i] = -w.wf(s[i]);
  }
  prof.delta = hv[0];
  prof.h = num::HermiteTable(s, hv, dh);
  prof.f_of_s = num::HermiteTable(std::move(s), std::move(fv), std::move(df));

  const double m_over_alpha = M / prof.alpha;
  if (prof.delta > m_over_alpha * (1.0 + 1e-10) ||
      m_over_alpha > geom.delta0 * (1.0 + 1e-10))
    throw std::logic_error("barrier construction violated delta <= M/alpha <= delta0");
  return prof;
}

BarrierProfile lower_profile(const BarrierProfile& prof) {
  BarrierProfile low = prof;
  low.is_lower = !prof.is_lower;
  return low;
}

namespace {

// invert d = h(s) on [alpha, beta]; h is strictly decreasing with
// h(beta) = 0 and h(alpha) = delta
double slope_at_depth(const BarrierProfile& prof, double d) {
  if (d < 0.0 || d > prof.delta * (1.0 + 1e-12))
    throw std::domain_error("barrier profile evaluated outside [0, delta]");
  if (prof.M == 0.0) return prof.alpha;
  if (d <= 0.0) return prof.beta;
  if (d >= prof.delta) return prof.alpha;
  Weights w{prof};
  const auto& s = prof.h.nodes();
  const auto& hv = prof.h.values();
  Eigen::Index lo = 0, hi = s.size() - 1;  // hv decreasing in index
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (hv[mid] >= d) lo = mid; else hi = mid;
  }
  double a = s[lo], b = s[hi];
  double x = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double res = prof.h(x) - d;
    if (res > 0.0) a = x; else b = x;
    if (b - a <= 1e-15 * (1.0 + b)) break;
    const double newton = x + res / w.wh(x);  // h' = -wh
    x = (newton > a && newton < b) ? newton : 0.5 * (a + b);
  }
  return x;
}

}  // namespace

double eval_profile(const BarrierProfile& prof, double d) {
  const double sign = prof.is_lower ? -1.0 : 1.0;
  if (prof.M == 0.0) {
    if (d != 0.0) throw std::domain_error("degenerate profile has delta = 0");
    return 0.0;
  }
  if (d == 0.0) return 0.0;
  const double s = slope_at_depth(prof, d);
  if (s >= prof.h.x_max()) return 0.0;
  return sign * prof.f_of_s(s);
}

double profile_slope(const BarrierProfile& prof, double d) {
  return slope_at_depth(prof, d);
}

Eigen::ArrayXd profile_residual(const BarrierProfile& prof,
                                const Eigen::ArrayXd& s_samples,
                                double f_second_scale) {
  Weights w{prof};
  Eigen::ArrayXd out(s_samples.size());
  for (Eigen::Index i = 0; i < s_samples.size(); ++i) {
    const double s = s_samples[i];
    if (s < prof.alpha || s > prof.beta)
      throw std::domain_error("residual samples must lie in [alpha, beta]");
    const double f2 = f_second_scale / -w.wh(s);  // f'' = 1/h'(f')
    const double phi = prof.minorant(
        prof.regime == BarrierRegime::mild ? 2.0 * s / 3.0 : 4.0 * s / 3.0);
    const double certificate =
        prof.regime == BarrierRegime::mild ? phi / (s * s * s) : phi / (s * s);
    out[i] = prof.C_geom + f2 * certificate;
  }
  return out;
}

}  // namespace phidir
