#pragma once

// Frozen-coefficient Picard solver on structured 2D grids carrying a diagonal
// metric.  The discretization is the divergence (flux) form: face-centered
// coefficients sqrt(g) g^{ii} A(|grad u|) evaluated at the current iterate,
// which yields a symmetric positive definite system once the Dirichlet rows
// are eliminated.  One Picard step solves that frozen linear system back to
// the boundary data; the solve is a diagonally preconditioned conjugate
// gradient.  Singular or degenerate symbols are handled by a decreasing
// kappa schedule with warm starts; kappa = 0 is never evaluated.
//
// Charts: a Cartesian rectangle (identity metric) and a polar/warped annulus
// with metric diag(1, psi(r)^2), periodic in the angle.  For the annulus the
// Dirichlet boundary is the two circles; every angular node is interior.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "phidir/symbol.hpp"

namespace phidir {

enum class Chart { cartesian_rectangle, polar_annulus };

struct Grid {
  Chart chart = Chart::cartesian_rectangle;
  int nx = 3;      // interior nodes in x (or r)
  int ny = 3;      // interior nodes in y; for the annulus: angular nodes (periodic)
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
  double warp_k = 0.0;  // annulus warp: 0 -> psi(r) = r, else psi = sinh(k r)/k
  double hx = 0.0, hy = 0.0;

  static Grid cartesian(int nx, int ny, double x0, double x1, double y0, double y1);
  static Grid polar_annulus(int nr, int ntheta, double r0, double r1,
                            double warp_k = 0.0, double theta0 = 0.0,
                            double theta1 = 2.0 * M_PI);

  bool periodic_y() const { return chart == Chart::polar_annulus; }
  int rows() const { return nx + 2; }
  int cols() const { return periodic_y() ? ny : ny + 2; }
  int unknowns() const { return nx * ny; }
  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  bool is_boundary(int i, int j) const;

  double psi(double r) const;      // warp factor (annulus only)
  double sqrt_g(double x) const;   // volume density at first coordinate x
  double g11_inv(double x) const;
  double g22_inv(double x) const;
};

using BoundaryFn = std::function<double(double, double)>;

// Full nodal field with boundary nodes set from fn and interior set to the
// mean boundary value (the usual Picard start).
Eigen::MatrixXd boundary_field(const Grid& g, const BoundaryFn& fn);

struct PicardParams {
  int max_iters = 300;
  double theta = 1.0;           // damping, halved automatically on divergence
  double tol_update = 1e-12;    // on max interior |u_new - u|, relative
  double tol_residual = 1e-9;   // on the normalized weak residual
  double cg_tol = 1e-13;
};

struct Problem2D {
  SymbolSpec spec;                       // base symbol (any p > 1)
  Grid grid;
  BoundaryFn boundary;
  std::vector<double> kappa_schedule = {1e-2, 1e-4, 1e-6};
  PicardParams picard;
};

struct IterRecord {
  double kappa = 0.0;
  double update_norm = 0.0;
  double residual = 0.0;
};

struct Solution2D {
  Grid grid;
  Eigen::MatrixXd u;          // full nodal field, boundary rows carry the data
  Eigen::MatrixXd grad_norm;  // |grad u| per node
  std::vector<IterRecord> trace;
  bool converged = false;
  double final_residual = 0.0;
  double kappa_final = 0.0;
  std::string note;
};

struct Assembled {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  double min_face_coef = 0.0;
  double max_face_coef = 0.0;
};

// Linear system of the frozen-coefficient operator at iterate u_current.
// The symbol must be in exponent-2 (regularized) form so A(s) = a(s)/s is
// regular at s = 0.  Dirichlet rows are eliminated into the right-hand side.
Assembled assemble_linearized(const Grid& grid, const SymbolSpec& spec2,
                              const Eigen::MatrixXd& u_current);

Solution2D picard_solve(const Problem2D& prob, double kappa,
                        const Eigen::MatrixXd* u_init = nullptr);

// Runs the full decreasing kappa schedule with warm starts and a
// uniform-gradient sanity check across stages.
Solution2D kappa_continuation(const Problem2D& prob);

// Max over interior test hats of the discrete flux divergence, normalized by
// the largest single face flux.  Zero (to rounding) on exact discrete
// solutions with self-consistent coefficients.
double weak_residual(const Grid& grid, const SymbolSpec& spec2,
                     const Eigen::MatrixXd& u);

// Nodal |grad u|: centered differences inside, one-sided at the boundary,
// contracted with the inverse metric.
Eigen::MatrixXd gradient_field(const Grid& grid, const Eigen::MatrixXd& u);

}  // namespace phidir
