#include "heraldq/cases.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace heraldq {

namespace {

constexpr std::array<std::pair<Case, std::string_view>, 9> kTags{{
    {Case::Thermal, "thermal"},
    {Case::S_b, "S_b"},
    {Case::S_bdag, "S_bdag"},
    {Case::b_S, "b_S"},
    {Case::bdag_S, "bdag_S"},
    {Case::U_b, "U_b"},
    {Case::U_bdag, "U_bdag"},
    {Case::b_U, "b_U"},
    {Case::bdag_U, "bdag_U"},
}};

}  // namespace

std::string_view case_tag(Case c) {
  for (const auto& [k, tag] : kTags)
    if (k == c) return tag;
  throw std::invalid_argument("case_tag: unknown case");
}

std::optional<Case> case_from_tag(std::string_view tag) {
  for (const auto& [k, t] : kTags)
    if (t == tag) return k;
  return std::nullopt;
}

bool is_squeeze_case(Case c) {
  return c == Case::S_b || c == Case::S_bdag || c == Case::b_S || c == Case::bdag_S;
}

bool is_measurement_case(Case c) {
  return c == Case::U_b || c == Case::U_bdag || c == Case::b_U || c == Case::bdag_U;
}

bool is_subtraction_case(Case c) {
  return c == Case::S_b || c == Case::b_S || c == Case::U_b || c == Case::b_U;
}

void CaseSpec::validate() const {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("nbar must be finite and >= 0");
  if (kind == Case::Thermal) return;
  if (!(amplitude_f > 0.0) || !std::isfinite(amplitude_f))
    throw std::invalid_argument("amplitude_f must be finite and > 0");
  if (is_squeeze_case(kind)) {
    if (!std::isfinite(squeeze_r)) throw std::invalid_argument("squeeze_r must be finite");
    if (chi != 0.0) throw std::invalid_argument("chi is only meaningful for measurement cases");
  } else {
    if (!(chi >= 0.0) || !std::isfinite(chi)) throw std::invalid_argument("chi must be finite and >= 0");
    if (squeeze_r != 0.0) throw std::invalid_argument("squeeze_r is only meaningful for squeeze cases");
  }
  if (const auto* win = std::get_if<Window>(&outcome)) {
    if (!(win->w > 0.0)) throw std::invalid_argument("window half-width must be > 0");
  } else if (!std::isfinite(std::get<FixedOutcome>(outcome).p_l)) {
    throw std::invalid_argument("outcome P_L must be finite");
  }
}

EffectiveParams effective_params(double chi, double nbar) {
  if (!(chi >= 0.0)) throw std::invalid_argument("effective_params: chi must be >= 0");
  if (!(nbar >= 0.0)) throw std::invalid_argument("effective_params: nbar must be >= 0");
  const double a = 1.0 + 2.0 * nbar;
  const double chi2 = chi * chi;
  EffectiveParams p;
  p.sigmaL_sq = 0.5 * (1.0 + chi2 * a);
  // (chi^2 + a)(chi^2 + 1/a) = 1 + chi^2 (a + 1/a + chi^2); log1p keeps xi = 0 exact at chi = 0.
  p.xi = 0.25 * std::log1p(chi2 * (a + 1.0 / a + chi2));
  p.zeta_xi = chi / (std::sqrt(2.0) * (chi2 + 1.0 / a));
  p.zeta = p.zeta_xi * std::exp(p.xi);
  p.mbar = 0.5 * (std::sqrt((chi2 + a) / (chi2 + 1.0 / a)) - 1.0);
  return p;
}

double chi_from_xi(double xi_target, double nbar) {
  if (!(xi_target >= 0.0)) throw std::invalid_argument("chi_from_xi: xi must be >= 0");
  if (!(nbar >= 0.0)) throw std::invalid_argument("chi_from_xi: nbar must be >= 0");
  if (xi_target == 0.0) return 0.0;
  // chi^4 + chi^2 (a + 1/a) - (e^{4 xi} - 1) = 0, non-negative root in cancellation-free form.
  const double a = 1.0 + 2.0 * nbar;
  const double b = a + 1.0 / a;
  const double e = std::expm1(4.0 * xi_target);
  const double chi2 = 2.0 * e / (b + std::sqrt(b * b + 4.0 * e));
  return std::sqrt(chi2);
}

CaseConstants case_constants(const CaseSpec& spec, const std::optional<EffectiveParams>& eff) {
  const double r = spec.squeeze_r;
  if (is_measurement_case(spec.kind) && !eff)
    throw std::invalid_argument("case_constants: measurement cases need effective parameters");
  switch (spec.kind) {
    case Case::Thermal:
      return {0.0, 0.0, 0.0};
    case Case::S_b:
      return {1.0, 0.0, 0.0};
    case Case::S_bdag:
      return {0.0, 1.0, 0.0};
    case Case::b_S:
      return {std::cosh(r), -std::sinh(r), 0.0};
    case Case::bdag_S:
      return {-std::sinh(r), std::cosh(r), 0.0};
    default:
      break;
  }
  const double chi = spec.chi;
  const double xi = eff->xi;
  const double ch = std::cosh(xi), sh = std::sinh(xi);
  const double em = std::exp(-xi);
  const double half_chi2 = 0.5 * chi * chi;
  const double zeta_em = eff->zeta * em;
  switch (spec.kind) {
    case Case::U_b:
      return {ch + half_chi2 * em, -sh + half_chi2 * em,
              -chi / std::sqrt(2.0) + (1.0 + chi * chi) * zeta_em};
    case Case::U_bdag:
      return {-sh - half_chi2 * em, ch - half_chi2 * em,
              chi / std::sqrt(2.0) + (1.0 - chi * chi) * zeta_em};
    case Case::b_U:
      return {ch, -sh, zeta_em};
    case Case::bdag_U:
      return {-sh, ch, zeta_em};
    default:
      throw std::invalid_argument("case_constants: unknown case");
  }
}

NormalForm normal_form(const CaseSpec& spec) {
  spec.validate();
  NormalForm nf;
  nf.kind = spec.kind;
  nf.outcome = spec.outcome;
  nf.nbar = spec.nbar;
  if (spec.kind == Case::Thermal) {
    nf.mbar_eff = spec.nbar;
    nf.amplitude_f = 1.0;
    nf.outcome = FixedOutcome{};
    return nf;
  }
  nf.amplitude_f = spec.amplitude_f;
  if (is_squeeze_case(spec.kind)) {
    nf.xi_eff = spec.squeeze_r;
    nf.mbar_eff = spec.nbar;
    nf.constants = case_constants(spec, std::nullopt);
    nf.outcome = FixedOutcome{};
    return nf;
  }
  const EffectiveParams eff = effective_params(spec.chi, spec.nbar);
  nf.chi = spec.chi;
  nf.xi_eff = eff.xi;
  nf.zeta_xi = eff.zeta_xi;
  nf.mbar_eff = eff.mbar;
  nf.sigmaL_sq = eff.sigmaL_sq;
  nf.constants = case_constants(spec, eff);
  return nf;
}

}  // namespace heraldq
