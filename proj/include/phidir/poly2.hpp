#pragma once

// Bivariate polynomials with exact coefficient algebra, used to verify
// differential identities on flat grids with analytically computed
// derivatives.

#include <Eigen/Dense>
#include <initializer_list>
#include <tuple>

namespace phidir {

class Poly2 {
public:
  Poly2() : c_(Eigen::MatrixXd::Zero(1, 1)) {}

  // terms (i, j, coefficient) meaning coefficient * x^i * y^j
  Poly2(std::initializer_list<std::tuple<int, int, double>> terms) {
    int dx = 0, dy = 0;
    for (const auto& [i, j, v] : terms) {
      dx = std::max(dx, i);
      dy = std::max(dy, j);
    }
    c_ = Eigen::MatrixXd::Zero(dx + 1, dy + 1);
    for (const auto& [i, j, v] : terms) c_(i, j) += v;
  }

  double eval(double x, double y) const {
    double acc = 0.0;
    double xi = 1.0;
    for (Eigen::Index i = 0; i < c_.rows(); ++i) {
      double yj = 1.0;
      for (Eigen::Index j = 0; j < c_.cols(); ++j) {
        acc += c_(i, j) * xi * yj;
        yj *= y;
      }
      xi *= x;
    }
    return acc;
  }

  Poly2 dx() const {
    if (c_.rows() == 1) return Poly2();
    Poly2 out;
    out.c_ = Eigen::MatrixXd::Zero(c_.rows() - 1, c_.cols());
    for (Eigen::Index i = 1; i < c_.rows(); ++i)
      out.c_.row(i - 1) = static_cast<double>(i) * c_.row(i);
    return out;
  }

  Poly2 dy() const {
    if (c_.cols() == 1) return Poly2();
    Poly2 out;
    out.c_ = Eigen::MatrixXd::Zero(c_.rows(), c_.cols() - 1);
    for (Eigen::Index j = 1; j < c_.cols(); ++j)
      out.c_.col(j - 1) = static_cast<double>(j) * c_.col(j);
    return out;
  }

  Poly2 operator+(const Poly2& o) const {
    Poly2 out;
    out.c_ = Eigen::MatrixXd::Zero(std::max(c_.rows(), o.c_.rows()),
                                   std::max(c_.cols(), o.c_.cols()));
    out.c_.topLeftCorner(c_.rows(), c_.cols()) += c_;
    out.c_.topLeftCorner(o.c_.rows(), o.c_.cols()) += o.c_;
    return out;
  }

  Poly2 operator-(const Poly2& o) const { return *this + (o * -1.0); }

  Poly2 operator*(double s) const {
    Poly2 out = *this;
    out.c_ *= s;
    return out;
  }

  Poly2 operator*(const Poly2& o) const {
    Poly2 out;
    out.c_ = Eigen::MatrixXd::Zero(c_.rows() + o.c_.rows() - 1,
                                   c_.cols() + o.c_.cols() - 1);
    for (Eigen::Index i = 0; i < c_.rows(); ++i)
      for (Eigen::Index j = 0; j < c_.cols(); ++j)
        if (c_(i, j) != 0.0)
          for (Eigen::Index k = 0; k < o.c_.rows(); ++k)
            for (Eigen::Index l = 0; l < o.c_.cols(); ++l)
              out.c_(i + k, j + l) += c_(i, j) * o.c_(k, l);
    return out;
  }

private:
  Eigen::MatrixXd c_;
};

}  // namespace phidir
