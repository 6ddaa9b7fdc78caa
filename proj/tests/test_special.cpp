#include <doctest.h>

#include <cmath>
#include <complex>

#include "heraldq/special.hpp"

using namespace heraldq;

TEST_CASE("hermite polynomials") {
  CHECK(hermite(0, 0.7) == 1.0);
  CHECK(hermite(1, 0.7) == doctest::Approx(1.4));
  CHECK(hermite(2, 0.7) == doctest::Approx(4 * 0.49 - 2));
  CHECK(hermite(3, 0.7) == doctest::Approx(8 * 0.343 - 12 * 0.7));
  CHECK(hermite(4, 0.7) == doctest::Approx(16 * 0.2401 - 48 * 0.49 + 12));
}

TEST_CASE("gaussian derivative values") {
  CHECK(gaussian_derivative(0, 0.0, 1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK(gaussian_derivative(1, 0.0, 1.0, 0.0) == 0.0);

  auto g = [](double x) { return std::exp(-(x - 0.3) * (x - 0.3) / 0.8) / std::sqrt(kPi * 0.8); };
  const double h = 1e-3;
  const double fd = (g(1.1 + h) - 2 * g(1.1) + g(1.1 - h)) / (h * h);
  CHECK(std::abs(gaussian_derivative(2, 0.3, 0.8, 1.1) - fd) < 1e-6);
  const double fd1 = (g(1.1 + h) - g(1.1 - h)) / (2 * h);
  CHECK(std::abs(gaussian_derivative(1, 0.3, 0.8, 1.1) - fd1) < 1e-6);
}

TEST_CASE("gaussian derivative of order 2 matches a fine finite difference to 1e-8") {
  auto g = [](long double x) {
    return std::exp(-(x - 0.3L) * (x - 0.3L) / 0.8L) / std::sqrt(3.14159265358979323846L * 0.8L);
  };
  const long double h = 1e-4L;
  const long double fd = (g(1.1L + h) - 2 * g(1.1L) + g(1.1L - h)) / (h * h);
  CHECK(std::abs(gaussian_derivative(2, 0.3, 0.8, 1.1) - double(fd)) < 1e-8);
}

TEST_CASE("gaussian derivative rejects non-positive variance") {
  CHECK_THROWS_AS(gaussian_derivative(0, 0.0, 0.0, 1.0), NotRepresentable);
  CHECK_THROWS_AS(gaussian_derivative(2, 0.0, -0.1, 1.0), NotRepresentable);
}

TEST_CASE("complex continuation of the Gaussian") {
  const std::complex<double> z(0.0, 0.8);
  const auto v = gaussian_derivative(0, 0.0, 1.0, z);
  CHECK(v.real() == doctest::Approx(std::exp(0.64) / std::sqrt(kPi)));
  CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("erf difference keeps precision in the tails") {
  CHECK(erf_difference(0.5, -0.5) == doctest::Approx(2 * std::erf(0.5)));
  const double tail = erf_difference(7.0, 6.5);
  CHECK(tail == doctest::Approx(std::erfc(6.5) - std::erfc(7.0)).epsilon(1e-13));
  CHECK(tail > 0.0);
  CHECK(erf_difference(-6.5, -7.0) == doctest::Approx(tail).epsilon(1e-13));
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(8, -1.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += rule.weights(i) * std::pow(rule.nodes(i), 15);
  CHECK(s == doctest::Approx((std::pow(2.0, 16) - 1.0) / 16.0).epsilon(1e-13));
  CHECK(rule.weights.sum() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("trapezoid weights") {
  const Eigen::VectorXd w = trapezoid_weights(5, 0.5);
  CHECK(w(0) == 0.25);
  CHECK(w(2) == 0.5);
  CHECK(w(4) == 0.25);
}
