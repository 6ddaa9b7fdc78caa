#include "heraldq/special.hpp"

#include <Eigen/Eigenvalues>

namespace heraldq {

double erf_difference(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::erfc(b) - std::erfc(a);
  if (a < 0.0 && b < 0.0) return std::erfc(-a) - std::erfc(-b);
  return std::erf(a) - std::erf(b);
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  QuadratureRule rule;
  rule.nodes = mid + half * eig.eigenvalues().array();
  rule.weights = (2.0 * half) * eig.eigenvectors().row(0).transpose().array().square();
  return rule;
}

Eigen::VectorXd trapezoid_weights(int n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  if (n > 1) {
    w(0) *= 0.5;
    w(n - 1) *= 0.5;
  }
  return w;
}

}  // namespace heraldq
