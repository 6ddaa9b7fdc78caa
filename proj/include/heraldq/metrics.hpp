#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>

#include "heraldq/cases.hpp"
#include "heraldq/fock_oracle.hpp"
#include "heraldq/quasiprob.hpp"

namespace heraldq {

/// Negativity of the single-quantum Fock state, 2 e^{-1/2} - 1.
double single_quantum_negativity();

/// delta = 1/2 (int |W| - int W) with the grid's trapezoid rule. The grid
/// must be a tau = 1/2 grid normalized to unit integral.
double wigner_negativity(const PhaseSpaceGrid& grid);

struct GridNotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Negativity of the normalized state, heated by tau_th, on a fitted grid.
/// Evaluated at grid_n and 2 grid_n - 1 points; returns the refined value and
/// throws GridNotConverged if the two differ by more than 1e-4.
double wigner_negativity(const NormalForm& nf, double tau_th = 0.0, int grid_n = 401);

/// True if R at tau exists and its fitted-grid minimum is >= -1e-9 max.
bool is_acceptable(const NormalForm& nf, double tau, int grid_n = 401);

/// Smallest tau for which R_{tau + tau_th} is acceptable, by bisection on
/// [0, 1] to width 1e-3.
double nonclassical_depth(const NormalForm& nf, double tau_th = 0.0, int grid_n = 401);

struct CatFidelity {
  double fidelity = 0.0;
  std::complex<double> beta;  // optimal cat amplitude
  double q = 0.0;             // Im beta
  double p_cat = 0.0;         // sqrt(2) q
  bool degenerate = false;    // optimum sits on the q lower bound
  bool searched_2d = false;   // x-symmetry failed, Re beta was searched too
};

/// Fidelity with (|beta> - |-beta>)/sqrt(N) from the diagonal element
/// <beta|rho|beta> and the cross element <beta|rho|-beta> of a normalized rho.
double cat_fidelity_from_elements(std::complex<double> beta, double diag_plus, double diag_minus,
                                  std::complex<double> cross);

/// Maximizes fidelity_at(i q) over q in [1e-3, 4]: coarse scan at 0.05, then
/// golden section to 1e-4. With two_d, Re beta in [-4, 4] is searched as well.
CatFidelity optimize_cat(const std::function<double(std::complex<double>)>& fidelity_at, bool two_d = false);

/// Cat fidelity at beta from the analytic tau = 1 expansion. The cross
/// element comes from the continuation of R_1 to complex arguments.
double cat_fidelity_at(const QuasiProbability& q_fn, double probability, std::complex<double> beta);

/// Cat fidelity at beta of an oracle density matrix.
double cat_fidelity_at(const FockDensityMatrix& rho, std::complex<double> beta);

CatFidelity cat_fidelity(const NormalForm& nf);
CatFidelity cat_fidelity(const FockDensityMatrix& rho);

/// [cosh^2 xi + 2 (m/(1+m))^2 sinh^2 xi] / [(1+m) cosh^2 xi + m sinh^2 xi].
double squeezed_fock_fidelity(double xi, double mbar);

/// The same for a bdag_U state at outcome 0; throws std::invalid_argument
/// for any other state.
double squeezed_fock_fidelity(const NormalForm& nf);

/// <1|S(xi)^dag rho S(xi)|1> for the normalized bdag_U state at outcome 0.
/// Equals squeezed_fock_fidelity / (1 + mbar).
double squeezed_fock_overlap(double xi, double mbar);

struct MetricsReport {
  double wigner_negativity = 0.0;
  double negativity_ratio = 0.0;
  double nonclassical_depth = 0.0;
  std::optional<CatFidelity> cat;
  std::optional<double> squeezed_fock_fidelity;
  double probability = 0.0;
};

struct MetricsOptions {
  double tau_th = 0.0;
  bool cat = false;
  int grid_n = 401;
};

MetricsReport compute_metrics(const NormalForm& nf, const MetricsOptions& opts = {});

}  // namespace heraldq
