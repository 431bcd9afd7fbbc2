#pragma once

// Explicit a-priori gradient bound formulas, evaluated exactly as stated so
// numerical solutions can be checked against the theory.  Free constants the
// theory does not construct are explicit inputs (default 1) and every
// evaluator refuses, rather than answers, when the structural condition
// backing it does not hold.

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "phidir/conditions.hpp"
#include "phidir/symbol.hpp"

namespace phidir {

struct EstimateParams {
  int n = 2;
  double r = 1.0;              // geodesic ball radius
  double M = 0.0;              // sup u (or oscillation, per bound)
  double ric_minus = 0.0;      // bound on |Ric^-|, >= 0
  double hess_rho2_max = 2.0;  // max |hess rho^2| on the ball (2 = flat value)
  double K = 2.0;              // auxiliary constant where free (> 1)
  double alpha = 0.0;
  double beta = 0.0;
  double eps = 0.0;
  double s0 = 0.0;
  double C_free = 1.0;         // the non-constructive constant
};

struct BoundResult {
  bool refused = false;
  std::string reason;
  double value = std::numeric_limits<double>::quiet_NaN();
};

double c0_bound(const Eigen::ArrayXd& boundary_samples);

// Interior bound under the mild-decay condition C10:
//   C { 1 + 1/r + (1 + hess)/r^2 + ric }^(1/2) (K+M) ln(K+M)^2,
// with K fixed by 2/(ln K - 1) = beta.  Requires beta > 0.
BoundResult local_bound_mild(const EstimateParams& p,
                             const ConditionReport* c10 = nullptr);

// Interior bound (on ln |grad u|) under the strong-decay condition C18_1:
//   C exp(K M) (1 + 1/r + ric + hess/r^2), K > 1 free.
BoundResult local_bound_strong(const EstimateParams& p,
                               const ConditionReport* c18 = nullptr);

struct StrongGlobalBound {
  bool refused = false;
  std::string reason;
  double K_required = 0.0;   // sqrt(ric / alpha); any larger K works
  double gradient_cap = 0.0; // s0 from the condition
};

StrongGlobalBound global_bound_strong(const SymbolSpec& spec, double ric_minus,
                                      double s0, double alpha,
                                      const ConditionReport* c11 = nullptr);

struct MildGlobalBound {
  bool refused = false;
  bool found = false;
  std::string reason;
  double K = 0.0;
  double gradient_cap = std::numeric_limits<double>::quiet_NaN();
};

// Gradient cap from the interior-maximum inequality
//   (K+u)^-2 ln(K+u)^-1 [ b+1 - b'^+(s)/ln(K+u) ] s^2 <= ric,  K = exp(1/beta):
// the smallest s at which the left side (with u = u_sup) exceeds ric is
// impossible at an interior maximum, hence caps the gradient there.  If the
// left side starts above ric the cap is the grid floor s0.  The grid is
// extended before reporting a cap as not found.
MildGlobalBound global_bound_mild(const SymbolSpec& spec, double ric_minus,
                                  double beta, double u_sup, double s0 = 1e-2,
                                  double s_max = 1e6, int grid_points = 4096,
                                  const ConditionReport* c6 = nullptr);

}  // namespace phidir
