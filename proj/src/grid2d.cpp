#include "phidir/grid2d.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <stdexcept>

namespace phidir {

Grid Grid::cartesian(int nx, int ny, double x0, double x1, double y0, double y1) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("grid needs at least 3x3 interior nodes");
  if (!(x1 > x0 && y1 > y0)) throw std::invalid_argument("degenerate grid ranges");
  Grid g;
  g.chart = Chart::cartesian_rectangle;
  g.nx = nx; g.ny = ny;
  g.x0 = x0; g.x1 = x1; g.y0 = y0; g.y1 = y1;
  g.hx = (x1 - x0) / (nx + 1);
  g.hy = (y1 - y0) / (ny + 1);
  return g;
}

Grid Grid::polar_annulus(int nr, int ntheta, double r0, double r1, double warp_k,
                         double theta0, double theta1) {
  if (nr < 3 || ntheta < 3) throw std::invalid_argument("grid needs at least 3x3 interior nodes");
  if (!(0.0 < r0 && r0 < r1)) throw std::invalid_argument("annulus needs 0 < r0 < r1");
  if (!(theta1 > theta0)) throw std::invalid_argument("degenerate angular range");
  Grid g;
  g.chart = Chart::polar_annulus;
  g.nx = nr; g.ny = ntheta;
  g.x0 = r0; g.x1 = r1; g.y0 = theta0; g.y1 = theta1;
  g.warp_k = warp_k;
  g.hx = (r1 - r0) / (nr + 1);
  g.hy = (theta1 - theta0) / ntheta;  // periodic: node ntheta wraps to node 0
  return g;
}

bool Grid::is_boundary(int i, int j) const {
  if (i == 0 || i == nx + 1) return true;
  if (!periodic_y() && (j == 0 || j == ny + 1)) return true;
  return false;
}

double Grid::psi(double r) const {
  if (warp_k == 0.0) return r;
  return std::sinh(warp_k * r) / warp_k;
}

double Grid::sqrt_g(double x) const {
  return chart == Chart::polar_annulus ? psi(x) : 1.0;
}

double Grid::g11_inv(double) const { return 1.0; }

double Grid::g22_inv(double x) const {
  if (chart != Chart::polar_annulus) return 1.0;
  const double p = psi(x);
  return 1.0 / (p * p);
}

Eigen::MatrixXd boundary_field(const Grid& g, const BoundaryFn& fn) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(g.rows(), g.cols());
  double sum = 0.0;
  long count = 0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (g.is_boundary(i, j)) {
        u(i, j) = fn(g.x(i), g.y(j));
        sum += u(i, j);
        ++count;
      }
  const double mean = count ? sum / count : 0.0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (!g.is_boundary(i, j)) u(i, j) = mean;
  return u;
}

namespace {

// Face machinery shared by assembly and the residual: coefficient and flux of
// the face leaving node (i,j) in direction d (0:+x 1:-x 2:+y 3:-y).
struct FaceOps {
  const Grid& g;
  const SymbolSpec& spec;
  const Eigen::MatrixXd& u;

  int wrap(int j) const {
    if (!g.periodic_y()) return j;
    const int n = g.ny;
    return (j % n + n) % n;
  }

  double at(int i, int j) const { return u(i, wrap(j)); }

  double dtheta_node(int i, int j) const {
    return (at(i, j + 1) - at(i, j - 1)) / (2.0 * g.hy);
  }
  double dx_node(int i, int j) const {
    return (u(i + 1, wrap(j)) - u(i - 1, wrap(j))) / (2.0 * g.hx);
  }

  // |grad u| at the face midpoint; normal component exact, transverse
  // component the arithmetic mean of the two adjacent nodal gradients.
  double grad_at_xface(int i, int j) const {  // face (i,j)-(i+1,j)
    const double dn = (u(i + 1, wrap(j)) - u(i, wrap(j))) / g.hx;
    const double dt = 0.5 * (dtheta_node(i, j) + dtheta_node(i + 1, j));
    const double xm = g.x(i) + 0.5 * g.hx;
    return std::sqrt(g.g11_inv(xm) * dn * dn + g.g22_inv(xm) * dt * dt);
  }
  double grad_at_yface(int i, int j) const {  // face (i,j)-(i,j+1)
    const double dn = (at(i, j + 1) - at(i, j)) / g.hy;
    const double dt = 0.5 * (dx_node(i, j) + dx_node(i, wrap(j + 1)));
    const double xm = g.x(i);
    return std::sqrt(g.g11_inv(xm) * dt * dt + g.g22_inv(xm) * dn * dn);
  }

  double coef_xface(int i, int j) const {
    const double xm = g.x(i) + 0.5 * g.hx;
    const double s = grad_at_xface(i, j);
    return A_of(spec, s) * g.sqrt_g(xm) * g.g11_inv(xm) * g.hy / g.hx;
  }
  double coef_yface(int i, int j) const {
    const double xm = g.x(i);
    const double s = grad_at_yface(i, j);
    return A_of(spec, s) * g.sqrt_g(xm) * g.g22_inv(xm) * g.hx / g.hy;
  }

  // coefficient and neighbor (i2,j2) of face d out of (i,j)
  double face(int i, int j, int d, int& i2, int& j2) const {
    switch (d) {
      case 0: i2 = i + 1; j2 = j; return coef_xface(i, j);
      case 1: i2 = i - 1; j2 = j; return coef_xface(i - 1, j);
      case 2: i2 = i; j2 = wrap(j + 1); return coef_yface(i, j);
      default: i2 = i; j2 = wrap(j - 1); return coef_yface(i, wrap(j - 1));
    }
  }
};

int unknown_index(const Grid& g, int i, int j) {
  return g.periodic_y() ? (i - 1) * g.ny + j : (i - 1) * g.ny + (j - 1);
}

void for_each_unknown(const Grid& g, const std::function<void(int, int)>& fn) {
  const int jlo = g.periodic_y() ? 0 : 1;
  const int jhi = g.periodic_y() ? g.ny - 1 : g.ny;
  for (int i = 1; i <= g.nx; ++i)
    for (int j = jlo; j <= jhi; ++j) fn(i, j);
}

}  // namespace

Assembled assemble_linearized(const Grid& grid, const SymbolSpec& spec2,
                              const Eigen::MatrixXd& u_current) {
  if (spec2.p != 2.0)
    throw std::invalid_argument(
        "assemble_linearized needs an exponent-2 symbol; regularize first");
  if (u_current.rows() != grid.rows() || u_current.cols() != grid.cols())
    throw std::invalid_argument("field shape does not match grid");

  FaceOps ops{grid, spec2, u_current};
  const int N = grid.unknowns();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * N);
  Assembled out;
  out.b = Eigen::VectorXd::Zero(N);
  out.min_face_coef = std::numeric_limits<double>::infinity();
  out.max_face_coef = 0.0;

  for_each_unknown(grid, [&](int i, int j) {
    const int k = unknown_index(grid, i, j);
    double diag = 0.0;
    for (int d = 0; d < 4; ++d) {
      int i2, j2;
      const double w = ops.face(i, j, d, i2, j2);
      if (!(w > 0.0))
        throw std::domain_error("non-positive face coefficient: symbol/kappa misconfigured");
      out.min_face_coef = std::min(out.min_face_coef, w);
      out.max_face_coef = std::max(out.max_face_coef, w);
      diag += w;
      if (grid.is_boundary(i2, j2))
        out.b[k] += w * u_current(i2, j2);
      else
        trip.emplace_back(k, unknown_index(grid, i2, j2), -w);
    }
    trip.emplace_back(k, k, diag);
  });

  out.A.resize(N, N);
  out.A.setFromTriplets(trip.begin(), trip.end());
  return out;
}

double weak_residual(const Grid& grid, const SymbolSpec& spec2,
                     const Eigen::MatrixXd& u) {
  FaceOps ops{grid, spec2, u};
  double worst = 0.0, scale = 0.0, w_max = 0.0;
  for_each_unknown(grid, [&](int i, int j) {
    double net = 0.0;
    for (int d = 0; d < 4; ++d) {
      int i2, j2;
      const double w = ops.face(i, j, d, i2, j2);
      const double flux = w * (u(i2, j2) - u(i, j));
      net += flux;
      scale = std::max(scale, std::abs(flux));
      w_max = std::max(w_max, w);
    }
    worst = std::max(worst, std::abs(net));
  });
  // a flux scale at the rounding level of the field itself is a zero-flux
  // problem (constant data); normalize absolutely there
  const double zero_floor = 1e3 * std::numeric_limits<double>::epsilon() * w_max *
                            (1.0 + u.cwiseAbs().maxCoeff());
  if (scale <= zero_floor)
    return w_max > 0.0 ? worst / (w_max * (1.0 + u.cwiseAbs().maxCoeff())) : 0.0;
  return worst / scale;
}

Eigen::MatrixXd gradient_field(const Grid& grid, const Eigen::MatrixXd& u) {
  auto wrap = [&](int j) {
    const int n = grid.ny;
    return grid.periodic_y() ? (j % n + n) % n : j;
  };
  Eigen::MatrixXd out(grid.rows(), grid.cols());
  const int rows = grid.rows(), cols = grid.cols();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double dx;
      if (i == 0) dx = (u(1, j) - u(0, j)) / grid.hx;
      else if (i == rows - 1) dx = (u(i, j) - u(i - 1, j)) / grid.hx;
      else dx = (u(i + 1, j) - u(i - 1, j)) / (2.0 * grid.hx);
      double dy;
      if (grid.periodic_y()) {
        dy = (u(i, wrap(j + 1)) - u(i, wrap(j - 1))) / (2.0 * grid.hy);
      } else if (j == 0) {
        dy = (u(i, 1) - u(i, 0)) / grid.hy;
      } else if (j == cols - 1) {
        dy = (u(i, j) - u(i, j - 1)) / grid.hy;
      } else {
        dy = (u(i, j + 1) - u(i, j - 1)) / (2.0 * grid.hy);
      }
      const double x = grid.x(i);
      out(i, j) = std::sqrt(grid.g11_inv(x) * dx * dx + grid.g22_inv(x) * dy * dy);
    }
  }
  return out;
}

namespace {

Eigen::VectorXd gather_interior(const Grid& g, const Eigen::MatrixXd& u) {
  Eigen::VectorXd v(g.unknowns());
  for_each_unknown(g, [&](int i, int j) { v[unknown_index(g, i, j)] = u(i, j); });
  return v;
}

void scatter_interior(const Grid& g, const Eigen::VectorXd& v, Eigen::MatrixXd& u) {
  for_each_unknown(g, [&](int i, int j) { u(i, j) = v[unknown_index(g, i, j)]; });
}

}  // namespace

Solution2D picard_solve(const Problem2D& prob, double kappa,
                        const Eigen::MatrixXd* u_init) {
  const Grid& g = prob.grid;
  const SymbolSpec spec2 = regularize(prob.spec, kappa);
  const PicardParams& pp = prob.picard;

  Solution2D sol;
  sol.grid = g;
  sol.kappa_final = kappa;
  sol.u = u_init ? *u_init : boundary_field(g, prob.boundary);
  // boundary data is authoritative regardless of the warm start
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (g.is_boundary(i, j)) sol.u(i, j) = prob.boundary(g.x(i), g.y(j));

  double theta = pp.theta;
  std::vector<double> updates;
  int last_damp = -1;

  for (int iter = 0; iter < pp.max_iters; ++iter) {
    Assembled sys = assemble_linearized(g, spec2, sol.u);
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper>
        cg;
    cg.setTolerance(pp.cg_tol);
    cg.setMaxIterations(50L * sys.A.rows());
    cg.compute(sys.A);
    Eigen::VectorXd w = cg.solveWithGuess(sys.b, gather_interior(g, sol.u));
    if (cg.info() != Eigen::Success)
      throw std::runtime_error("linear solve breakdown in picard_solve (CG did not converge)");

    Eigen::VectorXd cur = gather_interior(g, sol.u);
    Eigen::VectorXd next = (1.0 - theta) * cur + theta * w;
    const double update = (next - cur).cwiseAbs().maxCoeff() /
                          std::max(1.0, sol.u.cwiseAbs().maxCoeff());
    scatter_interior(g, next, sol.u);

    const double res = weak_residual(g, spec2, sol.u);
    sol.trace.push_back({kappa, update, res});
    sol.final_residual = res;

    if (res <= pp.tol_residual || update <= pp.tol_update) {
      sol.converged = true;
      break;
    }
    // growth or stagnation over a 10-iteration window: the undamped map
    // oscillates for strongly degenerate symbols, so halve theta and go on
    updates.push_back(update);
    const int k = static_cast<int>(updates.size()) - 1;
    if (k - last_damp >= 10 && updates[k] > 0.9 * updates[k - 10]) {
      theta *= 0.5;
      last_damp = k;
      if (theta < 1.0 / 64.0) {
        sol.note = "picard iteration diverged or stalled (damping exhausted)";
        sol.converged = false;
        sol.grad_norm = gradient_field(g, sol.u);
        return sol;
      }
    }
  }
  sol.grad_norm = gradient_field(g, sol.u);
  if (!sol.converged && sol.note.empty())
    sol.note = "picard iteration hit max_iters";
  return sol;
}

Solution2D kappa_continuation(const Problem2D& prob) {
  const auto& sched = prob.kappa_schedule;
  if (sched.empty()) throw std::invalid_argument("empty kappa schedule");
  for (size_t i = 0; i < sched.size(); ++i) {
    if (!(sched[i] > 0.0 && sched[i] <= 1.0))
      throw std::invalid_argument("kappa schedule entries must lie in (0, 1]");
    if (i && !(sched[i] < sched[i - 1]))
      throw std::invalid_argument("kappa schedule must be strictly decreasing");
  }

  Solution2D sol;
  std::vector<IterRecord> full_trace;
  Eigen::MatrixXd warm;
  double grad0 = 0.0;
  for (size_t stage = 0; stage < sched.size(); ++stage) {
    sol = picard_solve(prob, sched[stage], stage ? &warm : nullptr);
    full_trace.insert(full_trace.end(), sol.trace.begin(), sol.trace.end());
    if (!sol.converged) {
      sol.trace = std::move(full_trace);
      sol.note = "stage kappa=" + std::to_string(sched[stage]) + " failed: " + sol.note;
      return sol;
    }
    const double gmax = sol.grad_norm.maxCoeff();
    if (stage == 0) {
      grad0 = gmax;
    } else if (gmax > 20.0 * (1.0 + grad0)) {
      sol.trace = std::move(full_trace);
      sol.converged = false;
      sol.note = "gradient blow-up across the kappa schedule (uniform C1 check failed)";
      return sol;
    }
    warm = sol.u;
  }
  sol.trace = std::move(full_trace);
  return sol;
}

}  // namespace phidir
