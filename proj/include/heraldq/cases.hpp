#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace heraldq {

/// The operation applied to the thermal input. Operator products read right
/// to left: `S_b` subtracts a quantum and then squeezes, `bdag_U` measures
/// the quadrature and then adds a quantum. `Thermal` is the untouched input.
enum class Case { Thermal, S_b, S_bdag, b_S, bdag_S, U_b, U_bdag, b_U, bdag_U };

inline constexpr Case kAllOperationCases[] = {Case::S_b, Case::S_bdag, Case::b_S, Case::bdag_S,
                                              Case::U_b, Case::U_bdag, Case::b_U, Case::bdag_U};

std::string_view case_tag(Case c);
std::optional<Case> case_from_tag(std::string_view tag);

bool is_squeeze_case(Case c);
bool is_measurement_case(Case c);
/// True for the cases whose ladder operator is the annihilator b.
bool is_subtraction_case(Case c);

struct FixedOutcome {
  double p_l = 0.0;
};

/// Accept outcomes in the open interval (-w, w).
struct Window {
  double w = 0.0;
};

using OutcomeMode = std::variant<FixedOutcome, Window>;

struct CaseSpec {
  Case kind = Case::Thermal;
  double squeeze_r = 0.0;    // squeeze cases
  double chi = 0.0;          // measurement cases
  double amplitude_f = 1e-2; // (theta/2)^2 or epsilon^2
  double nbar = 0.0;
  OutcomeMode outcome = FixedOutcome{};

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;
};

/// Parameters of the Gaussian decomposition of a quadrature measurement
/// acting on a thermal state.
struct EffectiveParams {
  double sigmaL_sq = 0.0;  // outcome variance
  double xi = 0.0;         // effective squeezing
  double zeta = 0.0;       // displacement per unit outcome, before squeezing
  double zeta_xi = 0.0;    // zeta e^{-xi}, after reordering S and D
  double mbar = 0.0;       // effective thermal occupation
};

struct CaseConstants {
  double nu = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
};

/// S(xi) D(zeta_xi P_L) (nu b + mu b^dag + lambda P_L) acting on rho_mbar,
/// with every parameter resolved.
struct NormalForm {
  Case kind = Case::Thermal;
  double xi_eff = 0.0;
  double zeta_xi = 0.0;
  double mbar_eff = 0.0;
  CaseConstants constants;
  double amplitude_f = 1.0;
  double sigmaL_sq = 0.0;  // measurement cases only
  OutcomeMode outcome = FixedOutcome{};
  // Source parameters, kept for reporting.
  double chi = 0.0;
  double nbar = 0.0;

  bool is_measurement() const { return is_measurement_case(kind); }
  bool is_windowed() const { return std::holds_alternative<Window>(outcome); }
};

EffectiveParams effective_params(double chi, double nbar);

/// The unique chi >= 0 with effective_params(chi, nbar).xi == xi_target.
double chi_from_xi(double xi_target, double nbar);

CaseConstants case_constants(const CaseSpec& spec, const std::optional<EffectiveParams>& eff);

NormalForm normal_form(const CaseSpec& spec);

}  // namespace heraldq
