#include "phidir/symbol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "phidir/numerics.hpp"

namespace phidir {

namespace {

SymbolSpec finalize(SymbolSpec s) {
  s.A1 = expr::differentiate(s.A);
  s.A2 = expr::differentiate(s.A1);
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

SymbolSpec make_p_laplacian(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p_laplacian requires p > 1");
  SymbolSpec s;
  s.label = "p_laplacian(" + fmt(p) + ")";
  s.p = p;
  s.a_expr_src = "1";
  s.A = expr::constant(1.0);
  s.q = p - 1.0;
  s.delta_growth = 1.0;
  s.params = {{"p", p}};
  return finalize(std::move(s));
}

SymbolSpec make_minimal_surface() {
  SymbolSpec s;
  s.label = "minimal_surface";
  s.p = 2.0;
  s.a_expr_src = "(1 + s^2)^(-0.5)";
  s.A = expr::parse(s.a_expr_src);
  s.q = 2.0;           // s/sqrt(1+s^2) >= s^2 holds up to s ~ 0.786
  s.delta_growth = 0.5;
  s.sup_a = 1.0;
  return finalize(std::move(s));
}

SymbolSpec make_p_area(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p_area requires p > 1");
  SymbolSpec s;
  s.label = "p_area(" + fmt(p) + ")";
  s.p = p;
  s.a_expr_src = "(1 + s^p)^(-(p-1)/p)";
  s.A = expr::parse(s.a_expr_src, {{"p", p}});
  s.q = p;
  s.delta_growth = 0.5;
  s.sup_a = 1.0;
  // A'' carries an s^(p-2) factor, singular at 0 for p < 2
  s.s0_valid = (p < 2.0) ? 1e-8 : 0.0;
  s.params = {{"p", p}};
  return finalize(std::move(s));
}

SymbolSpec make_symbol(const std::string& label, double p,
                       const std::string& a_expr,
                       const std::map<std::string, double>& params,
                       double s0_valid, double q, double delta_growth) {
  if (!(p > 1.0)) throw std::invalid_argument("symbol requires p > 1");
  SymbolSpec s;
  s.label = label;
  s.p = p;
  s.a_expr_src = a_expr;
  s.A = expr::parse(a_expr, expr::Env(params.begin(), params.end()));
  s.s0_valid = s0_valid;
  s.q = q;
  s.delta_growth = delta_growth;
  s.params = params;
  return finalize(std::move(s));
}

double A_of(const SymbolSpec& s, double x) { return expr::eval(s.A, x); }
double A1_of(const SymbolSpec& s, double x) { return expr::eval(s.A1, x); }
double A2_of(const SymbolSpec& s, double x) { return expr::eval(s.A2, x); }

double a_of(const SymbolSpec& s, double x) {
  if (x < 0.0) throw std::domain_error("a(s) is defined for s >= 0");
  if (x == 0.0) return 0.0;
  return std::pow(x, s.p - 1.0) * A_of(s, x);
}

double a_prime_of(const SymbolSpec& s, double x) {
  if (!(x > 0.0)) throw std::domain_error("a'(s) evaluated at s <= 0");
  return (s.p - 1.0) * std::pow(x, s.p - 2.0) * A_of(s, x) +
         std::pow(x, s.p - 1.0) * A1_of(s, x);
}

DerivedSymbol::DerivedSymbol(SymbolSpec spec) : spec_(std::move(spec)) {}

double DerivedSymbol::b(double s) const {
  if (s < 0.0) throw std::domain_error("b(s) is defined for s >= 0");
  const double ratio = s * A1_of(spec_, s) / A_of(spec_, s);
  const double v = (spec_.p - 2.0) + ratio;
  if (!std::isfinite(v))
    throw std::domain_error("b(s) singular at s = " + std::to_string(s) +
                            " for " + spec_.label);
  return v;
}

double DerivedSymbol::b_prime(double s) const {
  if (s < spec_.s0_valid)
    throw std::domain_error("b'(s) requested below the symbol's C2 floor s0_valid");
  const double A = A_of(spec_, s);
  const double A1 = A1_of(spec_, s);
  const double A2 = A2_of(spec_, s);
  const double v = (A1 + s * A2) / A - s * (A1 / A) * (A1 / A);
  if (!std::isfinite(v))
    throw std::domain_error("b'(s) singular at s = " + std::to_string(s) +
                            " for " + spec_.label);
  return v;
}

SymbolSpec regularize(const SymbolSpec& spec, double kappa) {
  if (!(kappa > 0.0 && kappa <= 1.0))
    throw std::invalid_argument("regularize requires kappa in (0, 1]");
  SymbolSpec out;
  out.label = spec.label + "[kappa=" + fmt(kappa) + "]";
  out.p = 2.0;
  // a_k(s) = (kappa+s^2)^(p/2-1) A(s) s, i.e. exponent-2 coefficient below
  out.A = expr::mul(
      expr::pow(expr::add(expr::constant(kappa),
                          expr::pow(expr::variable("s"), expr::constant(2.0))),
                expr::constant(spec.p / 2.0 - 1.0)),
      spec.A);
  out.a_expr_src = expr::to_string(out.A);
  out.s0_valid = spec.s0_valid;
  out.sup_a = spec.sup_a;   // same tail: (kappa+s^2)^(p/2-1) s / s^(p-1) -> 1
  out.params = spec.params;
  out.params["kappa"] = kappa;
  return finalize(std::move(out));
}

double inverse_a(const SymbolSpec& spec, double t, double tol) {
  if (t < 0.0) throw std::domain_error("inverse_a: t must be >= 0");
  if (t == 0.0) return 0.0;
  if (t >= spec.sup_a)
    throw std::domain_error("inverse_a: t = " + std::to_string(t) +
                            " is at or above the saturation value of a for " +
                            spec.label);
  auto a = [&](double s) { return a_of(spec, s); };
  double hi = 1.0;
  int guard = 0;
  while (a(hi) < t) {
    hi *= 2.0;
    if (++guard > 900)
      throw std::domain_error("inverse_a: t not reachable (a appears bounded below t)");
  }
  // converge in s, not in a(s): near saturation a' is tiny and an a-space
  // stop would leave relative noise in s that downstream quadratures chase
  std::function<double(double)> f = a;
  std::function<double(double)> df = [&](double s) { return a_prime_of(spec, s); };
  (void)tol;
  return num::solve_increasing(f, 0.0, hi, t, 1e-14, &df);
}

EllipticityBounds ellipticity_bounds(const SymbolSpec& spec, double kappa,
                                     double s_max, int samples) {
  if (kappa < 0.0) throw std::invalid_argument("ellipticity_bounds: kappa < 0");
  if (!(s_max > 0.0)) throw std::invalid_argument("ellipticity_bounds: s_max <= 0");
  const double lo_floor = std::max(spec.s0_valid, 1e-12 * s_max);
  Eigen::ArrayXd grid = num::log_space(lo_floor, s_max, samples);
  const double mfloor = std::min(1.0, spec.p - 1.0);
  const double pplus = std::max(spec.p - 2.0, 0.0);

  EllipticityBounds out;
  out.c_low = std::numeric_limits<double>::infinity();
  out.C_high = -std::numeric_limits<double>::infinity();
  auto absorb = [&](double s) {
    const double A = A_of(spec, s);
    const double r = s == 0.0 ? 0.0 : s * A1_of(spec, s) / A;
    out.c_low = std::min({out.c_low, A, mfloor + r});
    out.C_high = std::max({out.C_high, A, 1.0 + pplus + r});
  };
  if (spec.s0_valid == 0.0) absorb(0.0);
  for (Eigen::Index i = 0; i < grid.size(); ++i) absorb(grid[i]);

  if (!(out.c_low > 0.0))
    throw std::domain_error("symbol is not uniformly elliptic on [0, " +
                            std::to_string(s_max) + "]: sampled minimum " +
                            std::to_string(out.c_low));
  return out;
}

void validate(const SymbolSpec& spec, double s_max) {
  if (!(spec.p > 1.0)) throw std::invalid_argument("symbol requires p > 1");
  Eigen::ArrayXd grid = num::log_space(1e-6, s_max, 257);
  double prev_a = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double A = A_of(spec, grid[i]);
    if (!(A > 0.0) || !std::isfinite(A))
      throw std::invalid_argument(spec.label + ": A(s) must be positive, got " +
                                  std::to_string(A) + " at s = " +
                                  std::to_string(grid[i]));
    const double a = a_of(spec, grid[i]);
    if (!(a > prev_a))
      throw std::invalid_argument(spec.label + ": a(s) must be strictly increasing");
    prev_a = a;
  }
  // continuity of A, A' at 0 along a refinement sequence
  for (double s = 1e-4; s >= 1e-9; s *= 0.1)
    if (!std::isfinite(A_of(spec, s)) || !std::isfinite(A1_of(spec, s)))
      throw std::invalid_argument(spec.label + ": A or A' not finite near 0");
  if (spec.q > 0.0 && spec.delta_growth > 0.0) {
    for (double s = spec.delta_growth; s >= 1e-8; s *= 0.5)
      if (a_of(spec, s) < std::pow(s, spec.q) * (1.0 - 1e-12))
        throw std::invalid_argument(spec.label +
                                    ": growth bound a(s) >= s^q fails at s = " +
                                    std::to_string(s));
  }
}

}  // namespace phidir
