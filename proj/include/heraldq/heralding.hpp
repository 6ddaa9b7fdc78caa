#pragma once

#include <optional>
#include <stdexcept>

#include "heraldq/cases.hpp"

namespace heraldq {

/// Gaussian density of the measurement outcome, variance sigmaL_sq.
double outcome_gaussian(double sigmaL_sq, double p_l);

/// f [nu^2 nbar + mu^2 (1 + nbar)].
double herald_prob_squeeze(double f, double nu, double mu, double nbar);

/// Probability of an outcome in (-w, w); w may be +infinity.
double herald_prob_window(double f, const CaseConstants& c, double sigmaL_sq, double mbar, double w);

/// Outcome probability density of a measurement-case state at P_L.
double outcome_density(const NormalForm& nf, double p_l);

class WindowOutOfRange : public std::out_of_range {
 public:
  WindowOutOfRange(const std::string& what, double saturation)
      : std::out_of_range(what), saturation_(saturation) {}
  /// p(w -> infinity) for the state that was asked about.
  double saturation() const { return saturation_; }

 private:
  double saturation_;
};

/// The w with herald_prob_window(..., w) == target_p, to relative tolerance
/// 1e-10. Throws WindowOutOfRange when target_p >= p(infinity).
double solve_window(double target_p, const NormalForm& nf);

/// tau_th = N_T nbar_bath / Q.
double thermal_decoherence_budget(double n_t, double nbar_bath, double q);

enum class HeraldMode { FixedOutcomeDensity, Windowed, DeterministicSqueeze };

struct HeraldReport {
  double probability = 0.0;
  HeraldMode mode = HeraldMode::DeterministicSqueeze;
  std::optional<double> window_w;
};

/// Total weight of the unnormalized conditional state. The thermal input
/// reports probability 1.
HeraldReport herald_report(const NormalForm& nf);

}  // namespace heraldq
