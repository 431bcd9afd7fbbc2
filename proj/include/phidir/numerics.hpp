#pragma once

// Small numerical kernels shared across the library: adaptive Simpson
// quadrature with Richardson error control, safeguarded bracketed root
// finding, cubic Hermite tables, and overflow-safe hyperbolic helpers.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace phidir::num {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Integral of f over [a, b]; `tol` is an absolute tolerance on the global
// error.  Adaptive Simpson driven by a worst-interval heap: the segment with
// the largest error estimate is split until the estimates sum below tol,
// stall at the rounding floor of their own contribution, or the evaluation
// budget runs out.  A global budget (rather than per-interval tolerance
// halving) keeps ill-conditioned integrands from subdividing forever once
// their pointwise noise exceeds any local tolerance.
template <class F>
QuadResult integrate(const F& f, double a, double b, double tol = 1e-12,
                     long max_evals = 400000) {
  QuadResult out;
  if (a == b) return out;

  struct Seg {
    double err, a, b, fa, fm, fb, S;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  auto simpson = [](double a_, double b_, double fa_, double fm_, double fb_) {
    return (b_ - a_) / 6.0 * (fa_ + 4.0 * fm_ + fb_);
  };

  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  out.evaluations = 3;
  std::priority_queue<Seg> heap;
  const double S0 = simpson(a, b, fa, fm, fb);
  heap.push({std::numeric_limits<double>::infinity(), a, b, fa, fm, fb, S0});
  double value = S0;
  double heap_err = std::numeric_limits<double>::infinity();
  double settled_err = 0.0;  // segments retired at their rounding floor

  while (!heap.empty() && settled_err + heap_err > tol &&
         out.evaluations < max_evals) {
    const Seg s = heap.top();
    heap.pop();
    heap_err = heap_err == std::numeric_limits<double>::infinity()
                   ? 0.0
                   : std::max(heap_err - s.err, 0.0);

    const double m = 0.5 * (s.a + s.b);
    const double eps = std::numeric_limits<double>::epsilon();
    if (m - s.a <= 32.0 * eps * (std::abs(s.a) + std::abs(m))) {
      settled_err += std::isfinite(s.err) ? s.err : 0.0;
      continue;  // interval is at point resolution
    }
    const double flm = f(0.5 * (s.a + m)), frm = f(0.5 * (m + s.b));
    out.evaluations += 2;
    const double SL = simpson(s.a, m, s.fa, flm, s.fm);
    const double SR = simpson(m, s.b, s.fm, frm, s.fb);
    const double delta = SL + SR - s.S;
    value += delta;
    const double child_err = std::abs(delta) / 15.0;
    const double noise = 4.0 * eps * (std::abs(SL) + std::abs(SR));
    if (child_err <= noise) {
      settled_err += child_err;
    } else {
      heap.push({child_err, s.a, m, s.fa, flm, s.fm, SL});
      heap.push({child_err, m, s.b, s.fm, frm, s.fb, SR});
      heap_err += 2.0 * child_err;
    }
  }
  out.value = value;
  out.error_estimate = settled_err + (heap.empty() ? 0.0 : heap_err);
  if (!std::isfinite(out.error_estimate)) out.error_estimate = std::abs(value);
  return out;
}

// Integral of f over [a, +inf) for integrands decaying at least like
// exp(-rate * t).  Uses the substitution t = a + log(1/(1-x)) / lam with
// lam = rate/2, which maps [0,1) onto [a,inf); running the map at half the
// guaranteed decay makes the transformed integrand vanish at x = 1 (at least
// linearly), so the endpoint is exact and the transform stays smooth.
template <class F>
QuadResult integrate_to_infinity(const F& f, double a, double rate,
                                 double tol = 1e-12) {
  if (!(rate > 0.0)) throw std::invalid_argument("decay rate must be positive");
  const double lam = 0.5 * rate;
  auto g = [&](double x) {
    if (x >= 1.0) return 0.0;
    const double t = a + std::log1p(-x) / -lam;
    const double v = f(t) / (lam * (1.0 - x));
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(g, 0.0, 1.0, tol);
}

// Solve f(x) = target for increasing f on [lo, hi] by bisection with Newton
// acceleration when df is supplied.  Throws if the target is not bracketed.
inline double solve_increasing(const std::function<double(double)>& f,
                               double lo, double hi, double target,
                               double x_tol = 1e-14,
                               const std::function<double(double)>* df = nullptr,
                               double f_tol = 0.0) {
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw std::domain_error("root not bracketed in solve_increasing");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double fx = f(x) - target;
    if (f_tol > 0.0 && std::abs(fx) <= f_tol) return x;
    if (fx > 0.0) hi = x; else lo = x;
    if (hi - lo <= x_tol * (1.0 + std::abs(lo) + std::abs(hi))) break;
    double next = 0.5 * (lo + hi);
    if (df) {
      const double d = (*df)(x);
      if (std::isfinite(d) && d > 0.0) {
        const double newton = x - fx / d;
        if (newton > lo && newton < hi) next = newton;
      }
    }
    x = next;
  }
  return 0.5 * (lo + hi);
}

// Expand an upper bracket for increasing f until f(hi) >= target.
// Returns the expanded hi; throws past the overflow guard.
inline double expand_upper(const std::function<double(double)>& f, double start,
                           double target, double guard = 1e12) {
  double hi = start;
  while (f(hi) < target) {
    hi *= 2.0;
    if (hi > guard)
      throw std::domain_error("bracket expansion exceeded overflow guard");
  }
  return hi;
}

// log(cosh(z)), stable for large |z|.
inline double log_cosh(double z) {
  const double az = std::abs(z);
  return az + std::log1p(std::exp(-2.0 * az)) - M_LN2;
}

// cosh(z)^e, computed in log space so large z underflows/overflows gracefully.
inline double cosh_pow(double z, double e) { return std::exp(e * log_cosh(z)); }

// Cubic Hermite table: nodes x (strictly increasing), values y, slopes dy.
// Endpoint queries return stored nodal values exactly.
class HermiteTable {
public:
  HermiteTable() = default;
  HermiteTable(Eigen::ArrayXd x, Eigen::ArrayXd y, Eigen::ArrayXd dy)
      : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
    if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != dy_.size())
      throw std::invalid_argument("HermiteTable: inconsistent node arrays");
    for (Eigen::Index i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("HermiteTable: nodes must increase");
  }

  double x_min() const { return x_[0]; }
  double x_max() const { return x_[x_.size() - 1]; }
  const Eigen::ArrayXd& nodes() const { return x_; }
  const Eigen::ArrayXd& values() const { return y_; }
  const Eigen::ArrayXd& slopes() const { return dy_; }

  double operator()(double x) const {
    if (x < x_min() || x > x_max())
      throw std::domain_error("HermiteTable: query outside table range");
    if (x == x_min()) return y_[0];
    if (x == x_max()) return y_[y_.size() - 1];
    Eigen::Index lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      if (x_[mid] <= x) lo = mid; else hi = mid;
    }
    const double h = x_[hi] - x_[lo];
    const double t = (x - x_[lo]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[lo] + h * h10 * dy_[lo] + h01 * y_[hi] + h * h11 * dy_[hi];
  }

private:
  Eigen::ArrayXd x_, y_, dy_;
};

inline Eigen::ArrayXd log_space(double lo, double hi, Eigen::Index n) {
  if (!(lo > 0.0 && hi > lo) || n < 2)
    throw std::invalid_argument("log_space: need 0 < lo < hi and n >= 2");
  Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, std::log(lo), std::log(hi));
  Eigen::ArrayXd out = t.exp();
  out[0] = lo;
  out[n - 1] = hi;
  return out;
}

}  // namespace phidir::num
