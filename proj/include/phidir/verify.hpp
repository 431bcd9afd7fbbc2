#pragma once

// Property-test oracles: comparison and maximum principles for converged
// discrete solutions, strict flux monotonicity of the symbol, the Bochner
// identity on flat grids with polynomial data, and cross-comparison of the
// 2D solver against the radial oracle.  Every check is deterministic:
// pass/fail is reproducible bit for bit from the same inputs and tolerances.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phidir/grid2d.hpp"
#include "phidir/poly2.hpp"
#include "phidir/radial.hpp"
#include "phidir/symbol.hpp"

namespace phidir {

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;
  Eigen::Index location = -1;  // flattened node / sample index of the worst case
  double tolerance_used = 0.0;
};

// u <= v + tol on interior nodes, given g_u <= g_v on the boundary (the
// boundary hypothesis is a precondition; violating it throws).
CheckReport comparison_check(const Solution2D& u, const Solution2D& v, double tol);

// | max over all nodes |u-v|  -  max over boundary |u-v| | <= tol.
CheckReport max_principle_check(const Solution2D& u, const Solution2D& v, double tol);

// (a(s) - a(t)) (s - t) > 0 for every sampled pair with s != t.
CheckReport monotonicity_check(const SymbolSpec& spec,
                               const std::vector<std::pair<double, double>>& pairs);

struct BochnerTerms {
  double grad_lap_dot_grad = 0.0;  // <grad lap u, grad u>
  double half_lap_gradsq = 0.0;    // (1/2) lap |grad u|^2
  double hess_sq = 0.0;            // |hess u|^2
};

// Exact term triple at one point, from polynomial coefficient algebra.
BochnerTerms bochner_terms(const Poly2& u, double x, double y);

// On a flat grid the three terms cancel: term1 - term2 + term3 == 0.
// Non-flat metrics are rejected (their curvature term is not represented).
CheckReport bochner_residual(const Poly2& u, const Grid& grid, double tol = 1e-10);

enum class ErrorNorm { inf, l2 };

// Difference between a 2D solution on a polar chart and the radial oracle on
// the same annulus, in the requested norm over all shared nodes.
CheckReport oracle_compare(const Solution2D& sol, const RadialSolution& radial,
                           ErrorNorm norm, double tol);

}  // namespace phidir
