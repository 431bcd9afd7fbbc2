#pragma once

// Grid certificates for the structural conditions classifying the decay of
// the eigenvalue ratio 1 + b^- of the linearized operator.  A certificate
// samples the condition's left-hand side on a log grid [s0, s_max]; it is
// evidence, not a proof.
//
// Supported conditions, with LHS and threshold:
//   I     (1 + b^-(s)) s^2              >= phi(s), phi = c s^m nondecreasing,
//                                          m >= 1 so the integral of phi/s^2 diverges
//   II    (1 + b^-(s)) s^2              >= phi(s), phi nonincreasing with
//                                          divergent integral of phi/s  =>  m = 0
//   C6    (b+1 - beta b'^+(s) s) s^2    >= phi(s), phi = c s^m -> inf  =>  m > 0
//   C10   B^-1 (b+1 - beta |b'(s)| s)   >= threshold (default: strictly positive)
//   C11_1 (-b'(s) s - (b+1)) s^2        >= threshold
//   C18_1 (-b'(s) s - (1+eps)(b+1)) s^2 >= threshold
//
// For I/II/C6 the report's infimum is the worst normalized margin
// (LHS - phi)/max(1, phi) over the grid; for the threshold conditions it is
// min over the grid of the LHS itself.  The
// minorant's monotonicity is recorded separately (minorant_nondecreasing) and
// is not required for C6.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phidir/symbol.hpp"

namespace phidir {

enum class ConditionId { I, II, C6, C10, C11_1, C18_1 };

std::string to_string(ConditionId id);
ConditionId condition_from_string(const std::string& s);

// Minorant restricted to the pure power family phi(s) = c * s^m, so the
// divergence requirements are decided exactly from m.
struct PowerMinorant {
  double c = 1.0;
  double m = 0.0;
  double operator()(double s) const;
};

struct ConditionParams {
  double s0 = 1.0;
  double beta = 1.0;        // C6, C10
  double eps = 0.25;        // C18_1
  PowerMinorant minorant;   // I, II, C6
  double threshold = 0.0;   // C10 (gamma), C11_1 / C18_1 (alpha); 0 = strictly positive
  double s_max = 1e6;
  int grid_points = 4096;
};

struct ConditionReport {
  ConditionId condition_id = ConditionId::I;
  ConditionParams params;
  std::string symbol_label;
  bool holds = false;
  double infimum_value = 0.0;
  double witness_s = 0.0;
  bool minorant_nondecreasing = true;
  std::string note;         // set when a family/divergence requirement fails
  Eigen::ArrayXd grid;
};

ConditionReport check_condition(const SymbolSpec& spec, ConditionId id,
                                const ConditionParams& params);

}  // namespace phidir
