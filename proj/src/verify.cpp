#include "phidir/verify.hpp"

#include <cmath>
#include <stdexcept>

namespace phidir {

namespace {

void require_same_grid(const Solution2D& u, const Solution2D& v) {
  const Grid &a = u.grid, &b = v.grid;
  if (a.chart != b.chart || a.nx != b.nx || a.ny != b.ny || a.x0 != b.x0 ||
      a.x1 != b.x1 || a.y0 != b.y0 || a.y1 != b.y1)
    throw std::invalid_argument("solutions live on different grids");
}

}  // namespace

CheckReport comparison_check(const Solution2D& u, const Solution2D& v, double tol) {
  require_same_grid(u, v);
  const Grid& g = u.grid;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (g.is_boundary(i, j) && u.u(i, j) > v.u(i, j) + 1e-14)
        throw std::invalid_argument(
            "comparison_check precondition violated: boundary data not ordered");

  CheckReport rep;
  rep.name = "comparison";
  rep.tolerance_used = tol;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) {
      if (g.is_boundary(i, j)) continue;
      const double d = u.u(i, j) - v.u(i, j);
      if (d > rep.worst_violation) {
        rep.worst_violation = d;
        rep.location = static_cast<Eigen::Index>(i) * g.cols() + j;
      }
    }
  rep.passed = rep.worst_violation <= tol;
  return rep;
}

CheckReport max_principle_check(const Solution2D& u, const Solution2D& v, double tol) {
  require_same_grid(u, v);
  const Grid& g = u.grid;
  double max_all = 0.0, max_bdry = 0.0;
  Eigen::Index where = -1;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) {
      const double d = std::abs(u.u(i, j) - v.u(i, j));
      if (d > max_all) {
        max_all = d;
        where = static_cast<Eigen::Index>(i) * g.cols() + j;
      }
      if (g.is_boundary(i, j)) max_bdry = std::max(max_bdry, d);
    }
  CheckReport rep;
  rep.name = "max_principle";
  rep.tolerance_used = tol;
  rep.worst_violation = std::abs(max_all - max_bdry);
  rep.location = where;
  rep.passed = rep.worst_violation <= tol;
  return rep;
}

CheckReport monotonicity_check(const SymbolSpec& spec,
                               const std::vector<std::pair<double, double>>& pairs) {
  CheckReport rep;
  rep.name = "monotone_flux";
  rep.tolerance_used = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [s, t] = pairs[idx];
    if (s == t) continue;  // the product is 0 there by definition
    const double prod = (a_of(spec, s) - a_of(spec, t)) * (s - t);
    const double violation = -prod;  // want strictly positive products
    if (violation > worst) {
      worst = violation;
      rep.location = static_cast<Eigen::Index>(idx);
    }
  }
  rep.worst_violation = worst;
  rep.passed = worst < 0.0;
  return rep;
}

BochnerTerms bochner_terms(const Poly2& u, double x, double y) {
  const Poly2 ux = u.dx(), uy = u.dy();
  const Poly2 uxx = ux.dx(), uxy = ux.dy(), uyy = uy.dy();
  const Poly2 lap = uxx + uyy;
  const Poly2 gradsq = ux * ux + uy * uy;
  BochnerTerms t;
  t.grad_lap_dot_grad = (lap.dx() * ux + lap.dy() * uy).eval(x, y);
  t.half_lap_gradsq = ((gradsq.dx().dx() + gradsq.dy().dy()) * 0.5).eval(x, y);
  t.hess_sq = (uxx * uxx + uxy * uxy * 2.0 + uyy * uyy).eval(x, y);
  return t;
}

CheckReport bochner_residual(const Poly2& u, const Grid& grid, double tol) {
  if (grid.chart != Chart::cartesian_rectangle)
    throw std::invalid_argument(
        "bochner_residual needs a flat metric (curvature term unavailable)");
  CheckReport rep;
  rep.name = "bochner";
  rep.tolerance_used = tol;
  for (int i = 0; i < grid.rows(); ++i)
    for (int j = 0; j < grid.cols(); ++j) {
      const BochnerTerms t = bochner_terms(u, grid.x(i), grid.y(j));
      const double res =
          std::abs(t.grad_lap_dot_grad - t.half_lap_gradsq + t.hess_sq);
      if (res > rep.worst_violation) {
        rep.worst_violation = res;
        rep.location = static_cast<Eigen::Index>(i) * grid.cols() + j;
      }
    }
  rep.passed = rep.worst_violation <= tol;
  return rep;
}

CheckReport oracle_compare(const Solution2D& sol, const RadialSolution& radial,
                           ErrorNorm norm, double tol) {
  const Grid& g = sol.grid;
  if (g.chart != Chart::polar_annulus)
    throw std::invalid_argument("oracle_compare needs a polar chart");
  if (g.x0 != radial.manifold.r_min || g.x1 != radial.manifold.r_max)
    throw std::invalid_argument("oracle_compare: annulus ranges do not match");
  const bool grid_flat = g.warp_k == 0.0;
  const bool radial_flat = radial.manifold.kind == "euclidean";
  if (grid_flat != radial_flat ||
      (!grid_flat && g.warp_k != radial.manifold.k) || radial.manifold.n != 2)
    throw std::invalid_argument("oracle_compare: manifolds do not match");

  CheckReport rep;
  rep.name = norm == ErrorNorm::inf ? "oracle_compare_inf" : "oracle_compare_l2";
  rep.tolerance_used = tol;
  double sq_sum = 0.0;
  long count = 0;
  for (int i = 0; i < g.rows(); ++i) {
    const double target = evaluate_radial(radial, g.x(i));
    for (int j = 0; j < g.cols(); ++j) {
      const double d = std::abs(sol.u(i, j) - target);
      ++count;
      sq_sum += d * d;
      if (d > rep.worst_violation && norm == ErrorNorm::inf) {
        rep.worst_violation = d;
        rep.location = static_cast<Eigen::Index>(i) * g.cols() + j;
      }
    }
  }
  if (norm == ErrorNorm::l2) rep.worst_violation = std::sqrt(sq_sum / count);
  rep.passed = rep.worst_violation <= tol;
  return rep;
}

}  // namespace phidir
