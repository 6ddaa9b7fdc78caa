#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace heraldq {

inline constexpr double kPi = std::numbers::pi;

/// Raised when a Gaussian-derivative expansion has a non-positive variance,
/// i.e. the requested quasi-probability does not exist as a function.
class NotRepresentable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Physicists' Hermite polynomial H_n(u) by the three-term recurrence.
template <typename Scalar>
Scalar hermite(int n, const Scalar& u) {
  Scalar h0(1.0);
  if (n == 0) return h0;
  Scalar h1 = 2.0 * u;
  for (int k = 1; k < n; ++k) {
    Scalar h2 = 2.0 * u * h1 - 2.0 * double(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// d^order/dx^order of g(x) = exp(-(x-mean)^2/var2) / sqrt(pi var2), where
/// var2 = 2 sigma^2. Evaluated as (-1)^n var2^{-n/2} H_n(u) g with
/// u = (x-mean)/sqrt(var2). Complex x gives the analytic continuation.
template <typename Scalar>
Scalar gaussian_derivative(int order, double mean, double var2, const Scalar& x) {
  if (!(var2 > 0.0)) throw NotRepresentable("gaussian_derivative: var2 must be positive");
  const double s = std::sqrt(var2);
  const Scalar u = (x - mean) / s;
  const Scalar g = std::exp(-u * u) / std::sqrt(kPi * var2);
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(s, -order) * hermite(order, u) * g;
}

/// j-th derivative of the standard normal density phi(u).
template <typename Scalar>
Scalar std_normal_derivative(int order, const Scalar& u) {
  return gaussian_derivative(order, 0.0, 2.0, u);
}

/// erf(a) - erf(b) without cancellation when a and b share a sign.
double erf_difference(double a, double b);

/// Nodes and weights of an n-point Gauss-Legendre rule on [lo, hi].
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

QuadratureRule gauss_legendre(int n, double lo, double hi);

/// Composite trapezoid weights for n equispaced nodes with spacing h.
Eigen::VectorXd trapezoid_weights(int n, double h);

}  // namespace heraldq
