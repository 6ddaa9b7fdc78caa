#include "heraldq/heralding.hpp"

#include <cmath>
#include <string>

#include "heraldq/special.hpp"

namespace heraldq {

double outcome_gaussian(double sigmaL_sq, double p_l) {
  return std::exp(-p_l * p_l / (2.0 * sigmaL_sq)) / std::sqrt(2.0 * kPi * sigmaL_sq);
}

double herald_prob_squeeze(double f, double nu, double mu, double nbar) {
  return f * (nu * nu * nbar + mu * mu * (1.0 + nbar));
}

double herald_prob_window(double f, const CaseConstants& c, double sigmaL_sq, double mbar, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("herald_prob_window: w must be > 0");
  const double l2s = c.lambda * c.lambda * sigmaL_sq;
  const double a = c.nu * c.nu * mbar + c.mu * c.mu * (1.0 + mbar) + l2s;
  if (std::isinf(w)) return f * a;
  const double e = std::erf(w / std::sqrt(2.0 * sigmaL_sq));
  return f * (a * e - 2.0 * l2s * w * outcome_gaussian(sigmaL_sq, w));
}

double outcome_density(const NormalForm& nf, double p_l) {
  if (!nf.is_measurement()) throw std::invalid_argument("outcome_density: not a measurement case");
  const auto& c = nf.constants;
  const double s = c.lambda * p_l;
  const double weight = c.nu * c.nu * nf.mbar_eff + c.mu * c.mu * (1.0 + nf.mbar_eff) + s * s;
  return nf.amplitude_f * outcome_gaussian(nf.sigmaL_sq, p_l) * weight;
}

double solve_window(double target_p, const NormalForm& nf) {
  if (!nf.is_measurement()) throw std::invalid_argument("solve_window: not a measurement case");
  if (!(target_p > 0.0)) throw std::invalid_argument("solve_window: target must be > 0");
  auto p = [&](double w) {
    return herald_prob_window(nf.amplitude_f, nf.constants, nf.sigmaL_sq, nf.mbar_eff, w);
  };
  const double sat = p(INFINITY);
  if (!(target_p < sat))
    throw WindowOutOfRange("herald target " + std::to_string(target_p) +
                               " is not below the saturation probability " + std::to_string(sat),
                           sat);
  double lo = 0.0;
  double hi = std::sqrt(nf.sigmaL_sq);
  while (p(hi) < target_p) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (p(mid) < target_p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double thermal_decoherence_budget(double n_t, double nbar_bath, double q) {
  if (!(n_t > 0.0) || !(nbar_bath >= 0.0) || !(q > 0.0))
    throw std::invalid_argument("thermal_decoherence_budget: need N_T > 0, nbar_bath >= 0, Q > 0");
  return n_t * nbar_bath / q;
}

HeraldReport herald_report(const NormalForm& nf) {
  HeraldReport rep;
  if (nf.kind == Case::Thermal) {
    rep.probability = 1.0;
    return rep;
  }
  if (!nf.is_measurement()) {
    rep.probability = herald_prob_squeeze(nf.amplitude_f, nf.constants.nu, nf.constants.mu, nf.mbar_eff);
    return rep;
  }
  if (const auto* win = std::get_if<Window>(&nf.outcome)) {
    rep.mode = HeraldMode::Windowed;
    rep.window_w = win->w;
    rep.probability = herald_prob_window(nf.amplitude_f, nf.constants, nf.sigmaL_sq, nf.mbar_eff, win->w);
    return rep;
  }
  rep.mode = HeraldMode::FixedOutcomeDensity;
  rep.probability = outcome_density(nf, std::get<FixedOutcome>(nf.outcome).p_l);
  return rep;
}

}  // namespace heraldq
