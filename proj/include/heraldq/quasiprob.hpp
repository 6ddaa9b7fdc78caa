#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "heraldq/cases.hpp"
#include "heraldq/special.hpp"

namespace heraldq {

/// One coefficient of a Gaussian-derivative expansion: the weight of
/// d^n/dx^n d^m/dy^m (and, for window-integrated states, d^l/dP_L^l).
struct ExpansionTerm {
  int n = 0;
  int m = 0;
  int l = 0;
  double value = 0.0;
};

struct CoeffTable {
  std::vector<ExpansionTerm> terms;

  /// Zero for index tuples that are not stored.
  double at(int n, int m, int l = 0) const;
};

/// P-function coefficients of (nu b + mu b^dag + lambda P_L) acting on rho_mbar,
/// in the basis of derivatives of a Gaussian with 2 sigma^2 = mbar.
CoeffTable pnm_coefficients(double mbar, double nu, double mu, double lambda, double p_l);

/// Coefficients of f_U(P_L) r_{n,m}(P_L) in derivatives of the outcome Gaussian.
CoeffTable rnml_coefficients(double mbar, double nu, double mu, double lambda, double xi,
                             double sigmaL_sq);

/// R_tau of a normal-form state as a finite sum of Gaussian derivatives.
///
/// Fixed outcome: prefactor * sum c_nm d^n g_{gain p_l, sigx}(x) d^m g_{0, sigy}(y).
/// Windowed: the same sum integrated over P_L in (-w, w), written with the
/// integration-by-parts boundary terms and an erf primitive.
/// Variances are stored as 2 sigma^2.
struct GaussianDerivativeExpansion {
  double tau = 0.5;
  double sigx_sq = 0.0;
  double sigy_sq = 0.0;
  double mean_x_gain = 0.0;
  double p_l = 0.0;
  double window = 0.0;  // > 0 only for window-integrated states
  double sigmaL_sq = 0.0;
  double prefactor = 1.0;
  CoeffTable coeffs;

  bool windowed() const { return window > 0.0; }

  template <typename Scalar>
  Scalar y_part(const ExpansionTerm& t, const Scalar& y) const {
    return gaussian_derivative(t.m, 0.0, sigy_sq, y);
  }

  template <typename Scalar>
  Scalar x_part(const ExpansionTerm& t, const Scalar& x) const {
    return gaussian_derivative(t.n, mean_x_gain * p_l, sigx_sq, x);
  }

  /// Window-integrated x factor of one term (real arguments only).
  double windowed_x_part(const ExpansionTerm& t, double x) const;

  double operator()(double x, double y) const;

  /// Analytic continuation. Fixed-outcome expansions only.
  std::complex<double> operator()(std::complex<double> x, std::complex<double> y) const;
};

/// Expansion of the state at a fixed outcome p_l, regardless of the state's
/// own outcome mode. Empty if a tau-shifted variance is not positive.
std::optional<GaussianDerivativeExpansion> fixed_expansion(const NormalForm& nf, double tau,
                                                           double p_l);

/// Expansion of a measurement-case state integrated over (-w, w).
std::optional<GaussianDerivativeExpansion> windowed_expansion(const NormalForm& nf, double tau,
                                                              double w);

/// Expansion matching the state's own outcome mode.
std::optional<GaussianDerivativeExpansion> state_expansion(const NormalForm& nf, double tau);

/// Unnormalized R_tau(x + iy) at outcome p_l; its integral is the outcome
/// density (measurement cases) or the heralding probability (squeeze cases).
template <typename Scalar>
std::optional<Scalar> eval_R(const NormalForm& nf, double tau, const Scalar& x, const Scalar& y,
                             double p_l) {
  const auto e = fixed_expansion(nf, tau, p_l);
  if (!e) return std::nullopt;
  return (*e)(x, y);
}

/// Unnormalized window-integrated R_tau(x + iy). Non-measurement states have
/// no outcome to integrate and evaluate as at a fixed outcome.
std::optional<double> eval_R_windowed(const NormalForm& nf, double tau, double x, double y,
                                      double w);

/// R_tau of a state for real and complex arguments. Complex evaluation of a
/// windowed state integrates the continued fixed-outcome expansions over the
/// window with 64-point Gauss-Legendre.
class QuasiProbability {
 public:
  static std::optional<QuasiProbability> create(const NormalForm& nf, double tau);

  double operator()(double x, double y) const { return main_(x, y); }
  std::complex<double> operator()(std::complex<double> x, std::complex<double> y) const;

  const GaussianDerivativeExpansion& expansion() const { return main_; }

 private:
  GaussianDerivativeExpansion main_;
  std::vector<GaussianDerivativeExpansion> nodes_;
  Eigen::VectorXd node_weights_;
};

/// Heated states are represented by R at tau + tau_th.
double apply_thermal_heating(double tau_query, double tau_th);

struct GridSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  double y_min = -6.0;
  double y_max = 6.0;
  int nx = 241;
  int ny = 241;

  static GridSpec square(double extent, int n);

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return x_min + i * dx(); }
  double y(int j) const { return y_min + j * dy(); }
  Eigen::VectorXd xs() const;
  Eigen::VectorXd ys() const;

  /// nx, ny must be odd and >= 3, extents ordered.
  void validate() const;
};

/// Samples of R_tau(x + iy); values(i, j) = R(x_i, y_j).
struct PhaseSpaceGrid {
  GridSpec spec;
  Eigen::MatrixXd values;
  double tau = 0.5;
  double norm = 0.0;  // composite trapezoid integral of values
};

double integrate(const GridSpec& spec, const Eigen::MatrixXd& values);

/// Throws NotRepresentable when R_tau does not exist.
PhaseSpaceGrid sample_grid(const NormalForm& nf, double tau, const GridSpec& spec);

/// Divides values and norm by the given total probability.
PhaseSpaceGrid normalized(PhaseSpaceGrid grid, double probability);

/// A grid that covers the state's support at this tau: centred on the mean,
/// n_sigma standard deviations beyond it on each axis.
GridSpec fitted_grid(const NormalForm& nf, double tau, int n = 401, double n_sigma = 10.0);

}  // namespace heraldq
