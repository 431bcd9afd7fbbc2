#pragma once

// Integrand symbols for the quasilinear operator
//     Q[u] = div( a(|grad u|)/|grad u| * grad u ),
// written in the normalized form a(s) = s^(p-1) A(s) with p > 1 and A > 0.
// A symbol carries analytic evaluators for A, A', A'' via the expression
// grammar, so the derived structural functions
//     b(s)     = s a'(s)/a(s) - 1 = (p-2) + s A'(s)/A(s)
//     B(s)     = max{1, 1+b(s)}
//     ratio(s) = (1+b(s))/B(s) = 1 + min{b(s), 0}
// are exact up to rounding.  All types are immutable after construction and
// every operation here is pure.

#include <limits>
#include <map>
#include <string>

#include "phidir/expr.hpp"

namespace phidir {

struct SymbolSpec {
  std::string label;
  double p = 2.0;           // exponent in a(s) = s^(p-1) A(s), p > 1
  expr::Node A;             // coefficient A(s) > 0
  expr::Node A1, A2;        // dA/ds, d2A/ds2 (symbolic)
  double s0_valid = 0.0;    // floor below which A'' (hence b') is undefined
  double q = 0.0;           // growth exponent: a(s) >= s^q on [0, delta_growth]; 0 = unset
  double delta_growth = 0.0;
  double sup_a = std::numeric_limits<double>::infinity();  // saturation value of a
  std::string a_expr_src;   // source text of A, for serialization
  std::map<std::string, double> params;
};

// Built-in integrands.
SymbolSpec make_p_laplacian(double p);       // A == 1,  a(s) = s^(p-1)
SymbolSpec make_minimal_surface();           // A = (1+s^2)^(-1/2), p = 2
SymbolSpec make_p_area(double p);            // A = (1+s^p)^(-(p-1)/p)

// Custom symbol from an A(s) expression; throws on invalid input.
SymbolSpec make_symbol(const std::string& label, double p,
                       const std::string& a_expr,
                       const std::map<std::string, double>& params = {},
                       double s0_valid = 0.0, double q = 0.0,
                       double delta_growth = 0.0);

double A_of(const SymbolSpec& s, double x);
double A1_of(const SymbolSpec& s, double x);
double A2_of(const SymbolSpec& s, double x);
double a_of(const SymbolSpec& s, double x);        // s^(p-1) A(s)
double a_prime_of(const SymbolSpec& s, double x);  // for x > 0

// Structural functions of a symbol.  b' requires s >= s0_valid.
class DerivedSymbol {
public:
  explicit DerivedSymbol(SymbolSpec spec);

  double b(double s) const;
  double b_prime(double s) const;
  double B(double s) const { return std::max(1.0, 1.0 + b(s)); }
  double ratio(double s) const { return 1.0 + std::min(b(s), 0.0); }

  const SymbolSpec& spec() const { return spec_; }

private:
  SymbolSpec spec_;
};

inline DerivedSymbol derive(const SymbolSpec& spec) { return DerivedSymbol(spec); }

// kappa-regularization a_k(s) = (kappa + s^2)^(p/2-1) A(s) s, returned as a
// symbol in normalized form with exponent 2, so A_k(0) = kappa^(p/2-1) A(0) > 0
// and the operator is uniformly elliptic.  kappa must lie in (0, 1].
SymbolSpec regularize(const SymbolSpec& spec, double kappa);

// Monotone inverse of a.  inverse_a(s, 0) == 0 exactly; t at or above the
// saturation value of a throws std::domain_error.
double inverse_a(const SymbolSpec& spec, double t, double tol = 1e-12);

struct EllipticityBounds {
  double c_low = 0.0;
  double C_high = 0.0;
};

// Grid-sampled ellipticity constants on [0, s_max]:
//   c_low  = min over the grid of min{ A(s), min{1,p-1} + s A'(s)/A(s) }
//   C_high = max over the grid of max{ A(s), 1 + (p-2)^+ + s A'(s)/A(s) }
// The regularized quadratic form is then sandwiched between
// (kappa+s^2)^(p/2-1) c_low^2 and (kappa+s^2)^(p/2-1) C_high^2.
// Throws if the sampled minimum is not positive.
EllipticityBounds ellipticity_bounds(const SymbolSpec& spec, double kappa,
                                     double s_max, int samples = 4097);

// Basic validation: p > 1, A positive and finite on a probe grid, a(0) = 0,
// a strictly increasing on the probe grid, A and A' continuous at 0 along a
// refinement sequence.  Throws std::invalid_argument on violation.
void validate(const SymbolSpec& spec, double s_max = 1e3);

}  // namespace phidir
