#include "heraldq/metrics.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "heraldq/heralding.hpp"
#include "heraldq/special.hpp"

namespace heraldq {

namespace {

constexpr double kQMin = 1e-3;
constexpr double kQMax = 4.0;
constexpr double kCoarseStep = 0.05;
constexpr double kFineTol = 1e-4;

template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double single_quantum_negativity() { return 2.0 * std::exp(-0.5) - 1.0; }

double wigner_negativity(const PhaseSpaceGrid& grid) {
  if (std::abs(grid.tau - 0.5) > 1e-12) throw std::invalid_argument("wigner_negativity: grid is not at tau = 1/2");
  if (std::abs(grid.norm - 1.0) > 1e-6) throw std::invalid_argument("wigner_negativity: grid is not normalized");
  const double neg = -integrate(grid.spec, grid.values.cwiseMin(0.0));
  return std::abs(neg) < 1e-9 ? 0.0 : neg;
}

double wigner_negativity(const NormalForm& nf, double tau_th, int grid_n) {
  const double tau = apply_thermal_heating(0.5, tau_th);
  const double p = herald_report(nf).probability;
  auto at = [&](int n) {
    const PhaseSpaceGrid g = sample_grid(nf, tau, fitted_grid(nf, tau, n));
    return -integrate(g.spec, g.values.cwiseMin(0.0)) / p;
  };
  const double coarse = at(grid_n);
  const double fine = at(2 * grid_n - 1);
  if (std::abs(fine - coarse) > 1e-4)
    throw GridNotConverged("wigner_negativity: grid doubling changed delta by " + std::to_string(fine - coarse));
  return std::abs(fine) < 1e-9 ? 0.0 : fine;
}

bool is_acceptable(const NormalForm& nf, double tau, int grid_n) {
  if (!state_expansion(nf, tau)) return false;
  const PhaseSpaceGrid g = sample_grid(nf, tau, fitted_grid(nf, tau, grid_n));
  return g.values.minCoeff() >= -1e-9 * g.values.maxCoeff();
}

double nonclassical_depth(const NormalForm& nf, double tau_th, int grid_n) {
  auto ok = [&](double tau) { return is_acceptable(nf, apply_thermal_heating(tau, tau_th), grid_n); };
  if (ok(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 0x1p-14) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  // Acceptable everywhere above zero: the infimum is zero itself.
  return lo == 0.0 ? 0.0 : 0.5 * (lo + hi);
}

double cat_fidelity_from_elements(std::complex<double> beta, double diag_plus, double diag_minus,
                                  std::complex<double> cross) {
  const double n = -2.0 * std::expm1(-2.0 * std::norm(beta));
  return (diag_plus + diag_minus - 2.0 * cross.real()) / n;
}

CatFidelity optimize_cat(const std::function<double(std::complex<double>)>& fidelity_at, bool two_d) {
  CatFidelity best;
  best.fidelity = -INFINITY;
  best.searched_2d = two_d;
  const int nq = static_cast<int>(std::round((kQMax - kQMin) / kCoarseStep)) + 1;
  const int np = two_d ? static_cast<int>(std::round(2.0 * kQMax / kCoarseStep)) + 1 : 1;
  for (int j = 0; j < np; ++j) {
    const double p = two_d ? -kQMax + j * kCoarseStep : 0.0;
    for (int i = 0; i < nq; ++i) {
      const double q = std::min(kQMin + i * kCoarseStep, kQMax);
      const double f = fidelity_at({p, q});
      if (f > best.fidelity) {
        best.fidelity = f;
        best.beta = {p, q};
      }
    }
  }
  double p = best.beta.real();
  double q = best.beta.imag();
  for (int sweep = 0; sweep < (two_d ? 4 : 1); ++sweep) {
    q = golden_max([&](double t) { return fidelity_at({p, t}); }, std::max(kQMin, q - kCoarseStep),
                   std::min(kQMax, q + kCoarseStep), kFineTol);
    if (two_d)
      p = golden_max([&](double t) { return fidelity_at({t, q}); }, std::max(-kQMax, p - kCoarseStep),
                     std::min(kQMax, p + kCoarseStep), kFineTol);
  }
  const double f = fidelity_at({p, q});
  if (f >= best.fidelity) {
    best.fidelity = f;
    best.beta = {p, q};
  }
  best.q = best.beta.imag();
  best.p_cat = std::sqrt(2.0) * best.q;
  best.degenerate = best.q < kQMin + kCoarseStep;
  return best;
}

double cat_fidelity_at(const QuasiProbability& q_fn, double probability, std::complex<double> beta) {
  const double plus = kPi * q_fn(beta.real(), beta.imag()) / probability;
  const double minus = kPi * q_fn(-beta.real(), -beta.imag()) / probability;
  // <beta|rho|-beta> = pi e^{-2|beta|^2} R_1 continued to x = i Im beta, y = -i Re beta.
  const std::complex<double> ext = q_fn(std::complex<double>(0.0, beta.imag()), std::complex<double>(0.0, -beta.real()));
  const std::complex<double> cross = kPi * std::exp(-2.0 * std::norm(beta)) * ext / probability;
  return cat_fidelity_from_elements(beta, plus, minus, cross);
}

double cat_fidelity_at(const FockDensityMatrix& rho, std::complex<double> beta) {
  const double tr = rho.trace();
  const double plus = coherent_element(rho, beta, beta).real() / tr;
  const double minus = coherent_element(rho, -beta, -beta).real() / tr;
  return cat_fidelity_from_elements(beta, plus, minus, coherent_element(rho, beta, -beta) / tr);
}

CatFidelity cat_fidelity(const NormalForm& nf) {
  const auto q_fn = QuasiProbability::create(nf, 1.0);
  if (!q_fn) throw NotRepresentable("cat_fidelity: Q-function unavailable");
  const double prob = herald_report(nf).probability;
  bool symmetric = true;
  for (double x : {0.3, 0.9, 1.7})
    for (double y : {0.0, 0.6, 1.4}) {
      const double a = (*q_fn)(x, y), b = (*q_fn)(-x, y);
      if (std::abs(a - b) > 1e-10 * std::max(std::abs(a), 1e-300) + 1e-14 * prob) symmetric = false;
    }
  if (!symmetric) std::cerr << "warning: state is not x-symmetric, searching Re beta as well\n";
  return optimize_cat([&](std::complex<double> b) { return cat_fidelity_at(*q_fn, prob, b); }, !symmetric);
}

CatFidelity cat_fidelity(const FockDensityMatrix& rho) {
  return optimize_cat([&](std::complex<double> b) { return cat_fidelity_at(rho, b); });
}

double squeezed_fock_fidelity(double xi, double mbar) {
  const double c2 = std::pow(std::cosh(xi), 2), s2 = std::pow(std::sinh(xi), 2);
  const double ratio = mbar / (1.0 + mbar);
  return (c2 + 2.0 * ratio * ratio * s2) / ((1.0 + mbar) * c2 + mbar * s2);
}

double squeezed_fock_fidelity(const NormalForm& nf) {
  const auto* fixed = std::get_if<FixedOutcome>(&nf.outcome);
  if (nf.kind != Case::bdag_U || !fixed || fixed->p_l != 0.0)
    throw std::invalid_argument("squeezed_fock_fidelity applies to bdag_U at outcome 0 only");
  return squeezed_fock_fidelity(nf.xi_eff, nf.mbar_eff);
}

double squeezed_fock_overlap(double xi, double mbar) {
  return squeezed_fock_fidelity(xi, mbar) / (1.0 + mbar);
}

MetricsReport compute_metrics(const NormalForm& nf, const MetricsOptions& opts) {
  MetricsReport rep;
  rep.probability = herald_report(nf).probability;
  rep.wigner_negativity = wigner_negativity(nf, opts.tau_th, opts.grid_n);
  rep.negativity_ratio = rep.wigner_negativity / single_quantum_negativity();
  rep.nonclassical_depth = nonclassical_depth(nf, opts.tau_th, opts.grid_n);
  if (opts.cat) rep.cat = cat_fidelity(nf);
  const auto* fixed = std::get_if<FixedOutcome>(&nf.outcome);
  if (nf.kind == Case::bdag_U && fixed && fixed->p_l == 0.0) rep.squeezed_fock_fidelity = squeezed_fock_fidelity(nf);
  return rep;
}

}  // namespace heraldq
