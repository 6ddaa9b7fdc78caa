#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "heraldq/heralding.hpp"
#include "heraldq/special.hpp"

using namespace heraldq;

namespace {

NormalForm measured(Case c, double nbar, double xi = 0.5) {
  CaseSpec s;
  s.kind = c;
  s.nbar = nbar;
  s.chi = chi_from_xi(xi, nbar);
  return normal_form(s);
}

double p_window(const NormalForm& nf, double w) {
  return herald_prob_window(nf.amplitude_f, nf.constants, nf.sigmaL_sq, nf.mbar_eff, w);
}

}  // namespace

TEST_CASE("squeeze heralding") {
  CHECK(herald_prob_squeeze(1e-2, 1.0, 0.0, 0.0) == 0.0);
  CHECK(herald_prob_squeeze(1e-2, 0.0, 1.0, 0.0) == doctest::Approx(1e-2));
  for (Case c : {Case::S_b, Case::S_bdag, Case::b_S, Case::bdag_S}) {
    CaseSpec s;
    s.kind = c;
    s.squeeze_r = 0.5;
    s.nbar = 1.0;
    const double p = herald_report(normal_form(s)).probability;
    CHECK(p > 5e-3);
    CHECK(p < 5e-2);
  }
}

TEST_CASE("window heralding limits") {
  const auto nf = measured(Case::bdag_U, 1.0);
  const auto& c = nf.constants;
  const double sat = nf.amplitude_f * (c.nu * c.nu * nf.mbar_eff + c.mu * c.mu * (1 + nf.mbar_eff) +
                                       c.lambda * c.lambda * nf.sigmaL_sq);
  CHECK(p_window(nf, INFINITY) == doctest::Approx(sat).epsilon(1e-15));
  CHECK(p_window(nf, 40.0) == doctest::Approx(sat).epsilon(1e-14));
  CHECK(p_window(nf, 1e-12) < 1e-13);
  CHECK_THROWS_AS(p_window(nf, 0.0), std::invalid_argument);
}

TEST_CASE("window heralding is the integral of the outcome density") {
  const auto nf = measured(Case::U_bdag, 1.0);
  const auto rule = gauss_legendre(64, -1.3, 1.3);
  double s = 0.0;
  for (int k = 0; k < 64; ++k) s += rule.weights(k) * outcome_density(nf, rule.nodes(k));
  CHECK(p_window(nf, 1.3) == doctest::Approx(s).epsilon(1e-13));
}

TEST_CASE("window heralding is monotone and bounded") {
  for (Case c : {Case::U_b, Case::U_bdag, Case::b_U, Case::bdag_U}) {
    const auto nf = measured(c, 1.0);
    const double sat = p_window(nf, INFINITY);
    double prev = 0.0;
    for (double lw = -4.0; lw <= 1.5; lw += 0.1) {
      const double p = p_window(nf, std::pow(10.0, lw));
      CHECK(p >= prev);
      CHECK(p <= sat * (1 + 1e-14));
      prev = p;
    }
  }
}

TEST_CASE("solve window") {
  const auto nf = measured(Case::bdag_U, 1.0);
  CHECK(solve_window(p_window(nf, 1.7), nf) == doctest::Approx(1.7).epsilon(1e-9));
  const double w = solve_window(1e-4, nf);
  CHECK(w > 1e-3);
  CHECK(w < 1e-1);
  CHECK(p_window(nf, w) == doctest::Approx(1e-4).epsilon(1e-9));
  const double sat = p_window(nf, INFINITY);
  try {
    solve_window(1.1 * sat, nf);
    FAIL("expected an out-of-range error");
  } catch (const WindowOutOfRange& e) {
    CHECK(e.saturation() == doctest::Approx(sat));
  }
  CaseSpec s;
  s.kind = Case::S_b;
  CHECK_THROWS_AS(solve_window(1e-4, normal_form(s)), std::invalid_argument);
}

TEST_CASE("decoherence budget") {
  CHECK(thermal_decoherence_budget(100, 60, 1e6) == doctest::Approx(6e-3));
  CHECK(thermal_decoherence_budget(100, 0, 1e6) == 0.0);
  CHECK(thermal_decoherence_budget(100, 0.99e-2 * 1e6, 1e6) < 1.0);
  CHECK_THROWS_AS(thermal_decoherence_budget(0, 1, 1), std::invalid_argument);
}

TEST_CASE("herald reports") {
  CaseSpec s;
  CHECK(herald_report(normal_form(s)).probability == 1.0);
  s.kind = Case::bdag_U;
  s.chi = 1.0;
  s.nbar = 1.0;
  s.outcome = Window{0.05};
  const auto rep = herald_report(normal_form(s));
  CHECK(rep.mode == HeraldMode::Windowed);
  CHECK(rep.window_w == 0.05);
  s.outcome = FixedOutcome{0.2};
  CHECK(herald_report(normal_form(s)).mode == HeraldMode::FixedOutcomeDensity);
}
