#include "heraldq/fock_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "heraldq/parallel.hpp"
#include "heraldq/special.hpp"

namespace heraldq {

namespace {

Eigen::MatrixXd annihilator(int n) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) b(k - 1, k) = std::sqrt(double(k));
  return b;
}

Eigen::MatrixXcd embed(const Eigen::MatrixXcd& m, int n) {
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(n, n);
  big.topLeftCorner(m.rows(), m.cols()) = m;
  return big;
}

std::string format_mass(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", t);
  return buf;
}

/// Mass in the top tenth of the kept block plus everything beyond it.
void check_padded_tail(const Eigen::MatrixXcd& padded, int kept) {
  const Eigen::ArrayXd pops = padded.diagonal().real().cwiseAbs();
  const double total = pops.sum();
  const int start = kept - std::max(1, static_cast<int>(std::ceil(0.1 * kept)));
  const double t = total == 0.0 ? 0.0 : pops.tail(pops.size() - start).sum() / total;
  if (t > 1e-8)
    throw TruncationError("Fock truncation at dim " + std::to_string(kept) + " holds tail mass " + format_mass(t));
}

FockDensityMatrix conjugate_truncated(const Eigen::MatrixXd& op, const FockDensityMatrix& rho) {
  const int d = rho.dim();
  const Eigen::MatrixXcd big = embed(rho.elements, static_cast<int>(op.rows()));
  const Eigen::MatrixXcd opc = op.cast<std::complex<double>>();
  Eigen::MatrixXcd out = opc * big * opc.adjoint();
  check_padded_tail(out, d);
  FockDensityMatrix res{out.topLeftCorner(d, d)};
  res.elements = 0.5 * (res.elements + res.elements.adjoint()).eval();
  return res;
}

struct QuadratureBasis {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
};

QuadratureBasis position_basis(int n) {
  const Eigen::MatrixXd b = annihilator(n);
  const Eigen::MatrixXd x = (b + b.transpose()) / std::sqrt(2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x);
  return {eig.eigenvectors(), eig.eigenvalues()};
}

Eigen::MatrixXd measurement_operator(const QuadratureBasis& qb, double chi, double p_l) {
  const Eigen::ArrayXd d = std::pow(kPi, -0.25) * (-0.5 * (p_l - chi * qb.values.array()).square()).exp();
  return qb.vectors * d.matrix().asDiagonal() * qb.vectors.transpose();
}

}  // namespace

double tail_mass(const FockDensityMatrix& rho, double fraction) {
  const int d = rho.dim();
  const double tr = rho.trace();
  if (tr == 0.0) return 0.0;
  const int start = std::max(0, d - std::max(1, static_cast<int>(std::ceil(fraction * d))));
  double tail = 0.0;
  for (int k = start; k < d; ++k) tail += std::abs(rho.elements(k, k).real());
  return tail / std::abs(tr);
}

void check_tail(const FockDensityMatrix& rho, double tol) {
  const double t = tail_mass(rho);
  if (t > tol)
    throw TruncationError("Fock truncation at dim " + std::to_string(rho.dim()) + " holds tail mass " +
                          format_mass(t));
}

FockDensityMatrix thermal_dm(double nbar, int dim) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("thermal_dm: nbar must be >= 0");
  if (dim < 2) throw std::invalid_argument("thermal_dm: dim must be >= 2");
  const double q = nbar / (1.0 + nbar);
  if (std::pow(q, dim) >= 1e-12)
    throw TruncationError("thermal_dm: dim " + std::to_string(dim) + " too small for nbar " +
                          std::to_string(nbar));
  FockDensityMatrix rho{Eigen::MatrixXcd::Zero(dim, dim)};
  double p = 1.0 / (1.0 + nbar);
  for (int n = 0; n < dim; ++n) {
    rho.elements(n, n) = p;
    p *= q;
  }
  return rho;
}

FockDensityMatrix apply_ladder(const FockDensityMatrix& rho, Ladder which) {
  const Eigen::MatrixXd b = annihilator(rho.dim() + 1);
  return conjugate_truncated(which == Ladder::Annihilate ? b : Eigen::MatrixXd(b.transpose()), rho);
}

FockDensityMatrix apply_squeeze(const FockDensityMatrix& rho, double r) {
  if (r == 0.0) return rho;
  const int n = 2 * rho.dim();
  const Eigen::MatrixXd b = annihilator(n);
  const Eigen::MatrixXd b2 = b * b;
  const Eigen::MatrixXd gen = 0.5 * r * (b2 - b2.transpose());
  const Eigen::MatrixXd s = gen.exp();
  return conjugate_truncated(s, rho);
}

FockDensityMatrix apply_measurement(const FockDensityMatrix& rho, double chi, double p_l) {
  const QuadratureBasis qb = position_basis(2 * rho.dim());
  return conjugate_truncated(measurement_operator(qb, chi, p_l), rho);
}

FockDensityMatrix apply_measurement_window(const FockDensityMatrix& rho, double chi, double w, int nodes) {
  if (!(w > 0.0)) throw std::invalid_argument("apply_measurement_window: w must be > 0");
  const int d = rho.dim();
  const int n = 2 * d;
  const QuadratureBasis qb = position_basis(n);
  const auto rule = gauss_legendre(nodes, -w, w);
  const Eigen::MatrixXcd big = embed(rho.elements, n);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const Eigen::MatrixXcd m = measurement_operator(qb, chi, rule.nodes(k)).cast<std::complex<double>>();
    acc += rule.weights(k) * (m * big * m.adjoint());
  }
  check_padded_tail(acc, d);
  FockDensityMatrix res{acc.topLeftCorner(d, d)};
  res.elements = 0.5 * (res.elements + res.elements.adjoint()).eval();
  return res;
}

namespace {

FockDensityMatrix compose(const CaseSpec& spec, int dim) {
  FockDensityMatrix rho = thermal_dm(spec.nbar, dim);
  if (spec.kind == Case::Thermal) return rho;
  auto measure = [&](const FockDensityMatrix& in) {
    if (const auto* win = std::get_if<Window>(&spec.outcome)) return apply_measurement_window(in, spec.chi, win->w);
    return apply_measurement(in, spec.chi, std::get<FixedOutcome>(spec.outcome).p_l);
  };
  switch (spec.kind) {
    case Case::S_b: rho = apply_squeeze(apply_ladder(rho, Ladder::Annihilate), spec.squeeze_r); break;
    case Case::S_bdag: rho = apply_squeeze(apply_ladder(rho, Ladder::Create), spec.squeeze_r); break;
    case Case::b_S: rho = apply_ladder(apply_squeeze(rho, spec.squeeze_r), Ladder::Annihilate); break;
    case Case::bdag_S: rho = apply_ladder(apply_squeeze(rho, spec.squeeze_r), Ladder::Create); break;
    case Case::U_b: rho = measure(apply_ladder(rho, Ladder::Annihilate)); break;
    case Case::U_bdag: rho = measure(apply_ladder(rho, Ladder::Create)); break;
    case Case::b_U: rho = apply_ladder(measure(rho), Ladder::Annihilate); break;
    case Case::bdag_U: rho = apply_ladder(measure(rho), Ladder::Create); break;
    default: throw std::invalid_argument("oracle_state: unknown case");
  }
  rho.elements *= spec.amplitude_f;
  return rho;
}

}  // namespace

FockDensityMatrix oracle_state(const CaseSpec& spec, int dim) {
  spec.validate();
  if (dim > 0) return compose(spec, dim);
  for (int d : {64, 128, 256}) {
    try {
      return compose(spec, d);
    } catch (const TruncationError&) {
      if (d == 256) throw;
    }
  }
  throw TruncationError("oracle_state: unreachable");
}

double wigner_at(const FockDensityMatrix& rho, double x, double y) {
  const int d = rho.dim();
  const std::complex<double> beta(x, y);
  const double z = 4.0 * std::norm(beta);
  const std::complex<double> phase_step = z > 0.0 ? std::polar(1.0, std::arg(beta)) : 1.0;
  const auto& e = rho.elements;
  double acc = 0.0;
  std::complex<double> phase = 1.0;
  for (int k = 0; k < d; ++k, phase *= phase_step) {
    if (k > 0 && z == 0.0) break;
    // Normalized Laguerre functions sqrt(n!/(n+k)!) z^{k/2} e^{-z/2} L_n^k(z).
    double lprev = std::exp(-0.5 * z + (k > 0 ? 0.5 * k * std::log(z) : 0.0) - 0.5 * std::lgamma(k + 1.0));
    std::complex<double> band = lprev * e(0, k);
    double lcur = 0.0;
    if (d - k > 1) {
      lcur = (1.0 + k - z) * lprev / std::sqrt(k + 1.0);
      band -= lcur * e(1, k + 1);
    }
    for (int n = 1; n + 1 < d - k; ++n) {
      const double lnext = ((2.0 * n + 1.0 + k - z) * lcur * std::sqrt((n + 1.0) / (n + k + 1.0)) -
                            (n + k) * lprev * std::sqrt((n + 1.0) * n / ((n + k + 1.0) * (n + k)))) /
                           (n + 1.0);
      lprev = lcur;
      lcur = lnext;
      band += ((n + 1) % 2 == 0 ? 1.0 : -1.0) * lcur * e(n + 1, n + 1 + k);
    }
    acc += (k == 0 ? 1.0 : 2.0) * (band * phase).real();
  }
  return 2.0 / kPi * acc;
}

Eigen::VectorXcd coherent_vector(std::complex<double> beta, int dim) {
  Eigen::VectorXcd v(dim);
  v(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * beta / std::sqrt(double(n));
  return v;
}

std::complex<double> coherent_element(const FockDensityMatrix& rho, std::complex<double> beta1,
                                      std::complex<double> beta2) {
  const Eigen::VectorXcd v1 = coherent_vector(beta1, rho.dim());
  const Eigen::VectorXcd v2 = coherent_vector(beta2, rho.dim());
  return v1.dot(rho.elements * v2);
}

double q_at(const FockDensityMatrix& rho, double x, double y) {
  const std::complex<double> beta(x, y);
  return coherent_element(rho, beta, beta).real() / kPi;
}

namespace {

template <typename F>
Eigen::MatrixXd sample(const GridSpec& spec, F&& f) {
  spec.validate();
  Eigen::MatrixXd out(spec.nx, spec.ny);
  parallel_for(spec.nx, [&](int i) {
    const double x = spec.x(i);
    for (int j = 0; j < spec.ny; ++j) out(i, j) = f(x, spec.y(j));
  });
  return out;
}

}  // namespace

Eigen::MatrixXd wigner_grid(const FockDensityMatrix& rho, const GridSpec& spec) {
  return sample(spec, [&](double x, double y) { return wigner_at(rho, x, y); });
}

Eigen::MatrixXd q_grid(const FockDensityMatrix& rho, const GridSpec& spec) {
  return sample(spec, [&](double x, double y) { return q_at(rho, x, y); });
}

FockDensityMatrix odd_cat_dm(std::complex<double> beta, int dim) {
  Eigen::VectorXcd v = coherent_vector(beta, dim) - coherent_vector(-beta, dim);
  v.normalize();
  return {v * v.adjoint()};
}

double squeezed_fock_overlap_oracle(const FockDensityMatrix& rho, double s) {
  const FockDensityMatrix t = apply_squeeze(rho, -s);
  return t.elements(1, 1).real() / t.trace();
}

}  // namespace heraldq
