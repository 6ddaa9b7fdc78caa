#include "heraldq/quasiprob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heraldq/heralding.hpp"

namespace heraldq {

namespace {

constexpr int kWindowQuadratureNodes = 64;

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

void push_nonzero(CoeffTable& t, int n, int m, int l, double v) {
  if (v != 0.0) t.terms.push_back({n, m, l, v});
}

}  // namespace

double CoeffTable::at(int n, int m, int l) const {
  for (const auto& t : terms)
    if (t.n == n && t.m == m && t.l == l) return t.value;
  return 0.0;
}

CoeffTable pnm_coefficients(double mbar, double nu, double mu, double lambda, double p_l) {
  const double s = lambda * p_l;
  const double m1 = 1.0 + mbar;
  CoeffTable t;
  push_nonzero(t, 0, 0, 0, nu * nu * mbar + mu * mu * m1 + s * s);
  push_nonzero(t, 1, 0, 0, -nu * s * mbar - mu * s * m1);
  const double sq = 0.25 * nu * nu * mbar * mbar + 0.25 * mu * mu * m1 * m1;
  const double cross = 0.5 * nu * mu * mbar * m1;
  push_nonzero(t, 2, 0, 0, sq + cross);
  push_nonzero(t, 0, 2, 0, sq - cross);
  return t;
}

CoeffTable rnml_coefficients(double mbar, double nu, double mu, double lambda, double xi,
                             double sigmaL_sq) {
  const double m1 = 1.0 + mbar;
  CoeffTable t;
  push_nonzero(t, 0, 0, 0, nu * nu * mbar + mu * mu * m1 + lambda * lambda * sigmaL_sq);
  push_nonzero(t, 0, 0, 2, lambda * lambda * sigmaL_sq * sigmaL_sq);
  push_nonzero(t, 1, 0, 1, std::exp(-xi) * (nu * lambda * mbar + mu * lambda * m1) * sigmaL_sq);
  const double sq = 0.25 * nu * nu * mbar * mbar + 0.25 * mu * mu * m1 * m1;
  const double cross = 0.5 * nu * mu * mbar * m1;
  push_nonzero(t, 2, 0, 0, std::exp(-2.0 * xi) * (sq + cross));
  push_nonzero(t, 0, 2, 0, std::exp(2.0 * xi) * (sq - cross));
  return t;
}

double GaussianDerivativeExpansion::windowed_x_part(const ExpansionTerm& t, double x) const {
  const double zeta = mean_x_gain;
  const double w = window;
  const double lvar2 = 2.0 * sigmaL_sq;

  // Boundary terms of the l-fold integration by parts.
  double boundary = 0.0;
  for (int k = 0; k < t.l; ++k) {
    const double upper = gaussian_derivative(t.l - 1 - k, 0.0, lvar2, w) *
                         gaussian_derivative(t.n + k, zeta * w, sigx_sq, x);
    const double lower = gaussian_derivative(t.l - 1 - k, 0.0, lvar2, -w) *
                         gaussian_derivative(t.n + k, -zeta * w, sigx_sq, x);
    boundary += std::pow(zeta, k) * (upper - lower);
  }

  // J(x) = int_{-w}^{w} g_L(P) g_{zeta P, sigma_x}(x) dP = A(x) B(x), with A a
  // Gaussian of variance sigma_x^2 + zeta^2 sigma_L^2 and B a difference of
  // normal CDFs. kappa stays finite as zeta -> 0.
  const int order = t.n + t.l;
  const double sx2 = 0.5 * sigx_sq;
  const double sx = std::sqrt(sx2);
  const double kappa = std::sqrt(zeta * zeta + sx2 / sigmaL_sq);
  const double c = -zeta / (kappa * sx);
  const double u_hi = w * kappa / sx + c * x;
  const double u_lo = -w * kappa / sx + c * x;
  const double avar2 = 2.0 * (sx2 + zeta * zeta * sigmaL_sq);
  double dj = 0.0;
  for (int i = 0; i <= order; ++i) {
    double b_i;
    if (i == 0) {
      b_i = 0.5 * erf_difference(u_hi / std::sqrt(2.0), u_lo / std::sqrt(2.0));
    } else {
      b_i = std::pow(c, i) *
            (std_normal_derivative(i - 1, u_hi) - std_normal_derivative(i - 1, u_lo));
    }
    dj += binomial(order, i) * gaussian_derivative(order - i, 0.0, avar2, x) * b_i;
  }
  return boundary + std::pow(zeta, t.l) * dj;
}

double GaussianDerivativeExpansion::operator()(double x, double y) const {
  double acc = 0.0;
  for (const auto& t : coeffs.terms) {
    const double xp = windowed() ? windowed_x_part(t, x) : x_part(t, x);
    acc += t.value * xp * y_part(t, y);
  }
  return prefactor * acc;
}

std::complex<double> GaussianDerivativeExpansion::operator()(std::complex<double> x,
                                                             std::complex<double> y) const {
  if (windowed())
    throw std::invalid_argument("complex evaluation of a windowed expansion needs QuasiProbability");
  std::complex<double> acc = 0.0;
  for (const auto& t : coeffs.terms) acc += t.value * x_part(t, x) * y_part(t, y);
  return prefactor * acc;
}

std::optional<GaussianDerivativeExpansion> fixed_expansion(const NormalForm& nf, double tau,
                                                           double p_l) {
  const double xi = nf.xi_eff;
  const double base = 0.5 + nf.mbar_eff;
  GaussianDerivativeExpansion e;
  e.tau = tau;
  e.sigx_sq = base * std::exp(-2.0 * xi) + tau - 0.5;
  e.sigy_sq = base * std::exp(2.0 * xi) + tau - 0.5;
  if (!(e.sigx_sq > 0.0) || !(e.sigy_sq > 0.0)) return std::nullopt;
  e.mean_x_gain = nf.zeta_xi;
  e.p_l = p_l;

  if (nf.kind == Case::Thermal) {
    e.coeffs.terms.push_back({0, 0, 0, 1.0});
    return e;
  }
  const auto& c = nf.constants;
  const CoeffTable p = pnm_coefficients(nf.mbar_eff, c.nu, c.mu, c.lambda, p_l);
  for (auto t : p.terms) {
    t.value *= std::exp(-(t.n - t.m) * xi);
    e.coeffs.terms.push_back(t);
  }
  e.prefactor = nf.amplitude_f;
  if (nf.is_measurement()) e.prefactor *= outcome_gaussian(nf.sigmaL_sq, p_l);
  return e;
}

std::optional<GaussianDerivativeExpansion> windowed_expansion(const NormalForm& nf, double tau,
                                                              double w) {
  if (!(w > 0.0)) throw std::invalid_argument("windowed_expansion: w must be > 0");
  if (!nf.is_measurement()) return fixed_expansion(nf, tau, 0.0);
  auto e = fixed_expansion(nf, tau, 0.0);
  if (!e) return std::nullopt;
  const auto& c = nf.constants;
  e->coeffs = rnml_coefficients(nf.mbar_eff, c.nu, c.mu, c.lambda, nf.xi_eff, nf.sigmaL_sq);
  e->window = w;
  e->sigmaL_sq = nf.sigmaL_sq;
  e->prefactor = nf.amplitude_f;
  return e;
}

std::optional<GaussianDerivativeExpansion> state_expansion(const NormalForm& nf, double tau) {
  if (const auto* win = std::get_if<Window>(&nf.outcome)) return windowed_expansion(nf, tau, win->w);
  return fixed_expansion(nf, tau, std::get<FixedOutcome>(nf.outcome).p_l);
}

std::optional<double> eval_R_windowed(const NormalForm& nf, double tau, double x, double y,
                                      double w) {
  const auto e = windowed_expansion(nf, tau, w);
  if (!e) return std::nullopt;
  return (*e)(x, y);
}

std::optional<QuasiProbability> QuasiProbability::create(const NormalForm& nf, double tau) {
  auto main = state_expansion(nf, tau);
  if (!main) return std::nullopt;
  QuasiProbability q;
  q.main_ = std::move(*main);
  if (q.main_.windowed()) {
    const auto rule = gauss_legendre(kWindowQuadratureNodes, -q.main_.window, q.main_.window);
    q.node_weights_ = rule.weights;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k)
      q.nodes_.push_back(*fixed_expansion(nf, tau, rule.nodes(k)));
  }
  return q;
}

std::complex<double> QuasiProbability::operator()(std::complex<double> x,
                                                  std::complex<double> y) const {
  if (!main_.windowed()) return main_(x, y);
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) acc += node_weights_(Eigen::Index(k)) * nodes_[k](x, y);
  return acc;
}

double apply_thermal_heating(double tau_query, double tau_th) {
  if (!(tau_th >= 0.0)) throw std::invalid_argument("apply_thermal_heating: tau_th must be >= 0");
  return tau_query + tau_th;
}

GridSpec GridSpec::square(double extent, int n) {
  GridSpec g;
  g.x_min = g.y_min = -extent;
  g.x_max = g.y_max = extent;
  g.nx = g.ny = n;
  return g;
}

Eigen::VectorXd GridSpec::xs() const { return Eigen::VectorXd::LinSpaced(nx, x_min, x_max); }
Eigen::VectorXd GridSpec::ys() const { return Eigen::VectorXd::LinSpaced(ny, y_min, y_max); }

void GridSpec::validate() const {
  if (nx < 3 || ny < 3 || nx % 2 == 0 || ny % 2 == 0)
    throw std::invalid_argument("grid sample counts must be odd and >= 3");
  if (!(x_max > x_min) || !(y_max > y_min)) throw std::invalid_argument("grid extents must be ordered");
}

double integrate(const GridSpec& spec, const Eigen::MatrixXd& values) {
  const Eigen::VectorXd wx = trapezoid_weights(spec.nx, spec.dx());
  const Eigen::VectorXd wy = trapezoid_weights(spec.ny, spec.dy());
  return wx.dot(values * wy);
}

PhaseSpaceGrid sample_grid(const NormalForm& nf, double tau, const GridSpec& spec) {
  spec.validate();
  const auto e = state_expansion(nf, tau);
  if (!e) throw NotRepresentable("R_tau does not exist for this state at the requested tau");
  const Eigen::VectorXd xs = spec.xs();
  const Eigen::VectorXd ys = spec.ys();
  PhaseSpaceGrid grid;
  grid.spec = spec;
  grid.tau = tau;
  grid.values = Eigen::MatrixXd::Zero(spec.nx, spec.ny);
  // Every term factorizes into an x factor times a y factor.
  for (const auto& t : e->coeffs.terms) {
    Eigen::VectorXd fx(spec.nx), fy(spec.ny);
    for (int i = 0; i < spec.nx; ++i) fx(i) = e->windowed() ? e->windowed_x_part(t, xs(i)) : e->x_part(t, xs(i));
    for (int j = 0; j < spec.ny; ++j) fy(j) = e->y_part(t, ys(j));
    grid.values.noalias() += (e->prefactor * t.value) * fx * fy.transpose();
  }
  grid.norm = integrate(spec, grid.values);
  return grid;
}

PhaseSpaceGrid normalized(PhaseSpaceGrid grid, double probability) {
  if (!(probability > 0.0)) throw std::invalid_argument("normalized: probability must be > 0");
  grid.values /= probability;
  grid.norm /= probability;
  return grid;
}

GridSpec fitted_grid(const NormalForm& nf, double tau, int n, double n_sigma) {
  if (n % 2 == 0) ++n;
  const double base = 0.5 + nf.mbar_eff;
  const double sx = std::sqrt(std::max(0.5 * (base * std::exp(-2.0 * nf.xi_eff) + tau - 0.5), 1e-12));
  const double sy = std::sqrt(std::max(0.5 * (base * std::exp(2.0 * nf.xi_eff) + tau - 0.5), 1e-12));
  double centre = 0.0;
  double spread = 0.0;
  if (const auto* win = std::get_if<Window>(&nf.outcome)) {
    if (nf.is_measurement()) spread = nf.zeta_xi * std::min(win->w, n_sigma * std::sqrt(nf.sigmaL_sq));
  } else {
    centre = nf.zeta_xi * std::get<FixedOutcome>(nf.outcome).p_l;
  }
  GridSpec g;
  g.nx = g.ny = n;
  g.x_min = centre - spread - n_sigma * sx;
  g.x_max = centre + spread + n_sigma * sx;
  g.y_min = -n_sigma * sy;
  g.y_max = n_sigma * sy;
  return g;
}

}  // namespace heraldq
