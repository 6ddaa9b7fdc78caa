#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "heraldq/cases.hpp"
#include "heraldq/quasiprob.hpp"

namespace heraldq {

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number-basis density matrix, possibly unnormalized.
struct FockDensityMatrix {
  Eigen::MatrixXcd elements;

  int dim() const { return static_cast<int>(elements.rows()); }
  double trace() const { return elements.trace().real(); }
};

/// Fraction of the trace held by the top `fraction` of levels.
double tail_mass(const FockDensityMatrix& rho, double fraction = 0.1);

/// Throws TruncationError if tail_mass exceeds tol.
void check_tail(const FockDensityMatrix& rho, double tol = 1e-8);

/// Diagonal (1+nbar)^{-1} (nbar/(1+nbar))^n for n < dim.
FockDensityMatrix thermal_dm(double nbar, int dim);

enum class Ladder { Annihilate, Create };

/// b rho b^dag or b^dag rho b, without the amplitude f.
FockDensityMatrix apply_ladder(const FockDensityMatrix& rho, Ladder which);

/// S(r) rho S(r)^dag with S(r) = exp[r/2 (b^2 - b^dag^2)].
FockDensityMatrix apply_squeeze(const FockDensityMatrix& rho, double r);

/// U rho U^dag with U = pi^{-1/4} exp[-(P_L - chi X)^2 / 2]; trace is the
/// outcome density.
FockDensityMatrix apply_measurement(const FockDensityMatrix& rho, double chi, double p_l);

/// Integral of apply_measurement over P_L in (-w, w), Gauss-Legendre.
FockDensityMatrix apply_measurement_window(const FockDensityMatrix& rho, double chi, double w,
                                           int nodes = 64);

/// The unnormalized conditional state of a case, composed operator by
/// operator, scaled by the amplitude f. dim 0 picks 64 and escalates to 128
/// and 256 while the truncation checks fail.
FockDensityMatrix oracle_state(const CaseSpec& spec, int dim = 0);

/// Wigner function (tau = 1/2) at beta = x + iy.
double wigner_at(const FockDensityMatrix& rho, double x, double y);

/// Husimi function <beta|rho|beta>/pi (tau = 1) at beta = x + iy.
double q_at(const FockDensityMatrix& rho, double x, double y);

/// <beta1|rho|beta2>.
std::complex<double> coherent_element(const FockDensityMatrix& rho, std::complex<double> beta1,
                                      std::complex<double> beta2);

/// Coherent-state amplitudes e^{-|beta|^2/2} beta^n / sqrt(n!), n < dim.
Eigen::VectorXcd coherent_vector(std::complex<double> beta, int dim);

Eigen::MatrixXd wigner_grid(const FockDensityMatrix& rho, const GridSpec& spec);
Eigen::MatrixXd q_grid(const FockDensityMatrix& rho, const GridSpec& spec);

/// |beta> - |-beta>, normalized, as a density matrix.
FockDensityMatrix odd_cat_dm(std::complex<double> beta, int dim);

/// <1| S(s)^dag rho S(s) |1> / tr rho.
double squeezed_fock_overlap_oracle(const FockDensityMatrix& rho, double s);

}  // namespace heraldq
