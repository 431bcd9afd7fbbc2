#include "phidir/estimates.hpp"

#include <cmath>
#include <stdexcept>

#include "phidir/numerics.hpp"

namespace phidir {

namespace {

std::optional<BoundResult> refusal(const ConditionReport* rep) {
  if (rep && !rep->holds) {
    BoundResult r;
    r.refused = true;
    r.reason = "condition " + to_string(rep->condition_id) + " does not hold for " +
               rep->symbol_label + (rep->note.empty() ? "" : " (" + rep->note + ")");
    return r;
  }
  return std::nullopt;
}

}  // namespace

double c0_bound(const Eigen::ArrayXd& boundary_samples) {
  if (boundary_samples.size() == 0)
    throw std::invalid_argument("c0_bound: no boundary samples");
  return boundary_samples.abs().maxCoeff();
}

BoundResult local_bound_mild(const EstimateParams& p, const ConditionReport* c10) {
  if (!(p.beta > 0.0)) throw std::invalid_argument("local_bound_mild: beta must be > 0");
  if (!(p.r > 0.0)) throw std::invalid_argument("local_bound_mild: r must be > 0");
  if (auto r = refusal(c10)) return *r;
  const double K = std::exp(1.0 + 2.0 / p.beta);  // 2/(ln K - 1) = beta
  const double brace = 1.0 + 1.0 / p.r +
                       (1.0 + p.hess_rho2_max) / (p.r * p.r) + p.ric_minus;
  const double lnKM = std::log(K + p.M);
  BoundResult out;
  out.value = p.C_free * std::sqrt(brace) * (K + p.M) * lnKM * lnKM;
  return out;
}

BoundResult local_bound_strong(const EstimateParams& p, const ConditionReport* c18) {
  if (!(p.K > 1.0)) throw std::invalid_argument("local_bound_strong: K must be > 1");
  if (!(p.r > 0.0)) throw std::invalid_argument("local_bound_strong: r must be > 0");
  if (auto r = refusal(c18)) return *r;
  BoundResult out;
  out.value = p.C_free * std::exp(p.K * p.M) *
              (1.0 + 1.0 / p.r + p.ric_minus + p.hess_rho2_max / (p.r * p.r));
  return out;
}

StrongGlobalBound global_bound_strong(const SymbolSpec&, double ric_minus,
                                      double s0, double alpha,
                                      const ConditionReport* c11) {
  if (!(alpha > 0.0)) throw std::invalid_argument("global_bound_strong: alpha must be > 0");
  if (ric_minus < 0.0) throw std::invalid_argument("global_bound_strong: ric_minus < 0");
  StrongGlobalBound out;
  if (c11 && !c11->holds) {
    out.refused = true;
    out.reason = "condition C11_1 does not hold";
    return out;
  }
  out.K_required = std::sqrt(ric_minus / alpha);
  out.gradient_cap = s0;
  return out;
}

MildGlobalBound global_bound_mild(const SymbolSpec& spec, double ric_minus,
                                  double beta, double u_sup, double s0,
                                  double s_max, int grid_points,
                                  const ConditionReport* c6) {
  if (!(beta > 0.0)) throw std::invalid_argument("global_bound_mild: beta must be > 0");
  if (ric_minus < 0.0) throw std::invalid_argument("global_bound_mild: ric_minus < 0");
  MildGlobalBound out;
  if (c6 && !c6->holds) {
    out.refused = true;
    out.reason = "condition C6 does not hold";
    return out;
  }
  const double K = std::exp(1.0 / beta);
  out.K = K;
  const DerivedSymbol d = derive(spec);
  const double lnKu = std::log(K + u_sup);
  const double pref = 1.0 / ((K + u_sup) * (K + u_sup) * lnKu);
  auto lhs = [&](double s) {
    const double bp = s >= spec.s0_valid ? std::max(d.b_prime(s), 0.0) : 0.0;
    return pref * (d.b(s) + 1.0 - bp / lnKu) * s * s;
  };
  // b+1 can underflow against the rounding of s A'/A at huge s; a crossing
  // must clear the cancellation noise floor to count
  auto noise = [&](double s) {
    const double bp = s >= spec.s0_valid ? std::max(d.b_prime(s), 0.0) : 0.0;
    return 64.0 * std::numeric_limits<double>::epsilon() * pref * s * s *
           (1.0 + std::abs(d.b(s)) + bp * s / lnKu);
  };

  double lo = s0, hi = s_max;
  for (int round = 0; round < 3; ++round) {
    Eigen::ArrayXd grid = num::log_space(lo, hi, grid_points);
    double prev_s = grid[0];
    double prev_v = lhs(prev_s);
    if (prev_v > ric_minus + noise(prev_s)) {
      out.found = true;
      out.gradient_cap = prev_s;  // left side already impossible at the floor
      return out;
    }
    for (Eigen::Index i = 1; i < grid.size(); ++i) {
      const double s = grid[i];
      const double v = lhs(s);
      if (v > ric_minus + noise(s)) {
        std::function<double(double)> f = lhs;
        out.found = true;
        out.gradient_cap =
            num::solve_increasing(f, prev_s, s, ric_minus, 1e-13);
        return out;
      }
      prev_s = s;
      prev_v = v;
    }
    lo = hi;
    hi *= 100.0;
  }
  out.found = false;
  out.reason = "left side never exceeds ric_minus on the (extended) grid";
  return out;
}

}  // namespace phidir
