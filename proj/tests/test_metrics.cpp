#include <doctest.h>

#include <cmath>

#include "heraldq/heralding.hpp"
#include "heraldq/metrics.hpp"

using namespace heraldq;

namespace {

NormalForm squeeze(Case c, double r, double nbar) {
  CaseSpec s;
  s.kind = c;
  s.squeeze_r = r;
  s.nbar = nbar;
  return normal_form(s);
}

NormalForm measured(Case c, double xi, double nbar, std::optional<double> herald_p = std::nullopt) {
  CaseSpec s;
  s.kind = c;
  s.nbar = nbar;
  s.chi = chi_from_xi(xi, nbar);
  if (herald_p) s.outcome = Window{solve_window(*herald_p, normal_form(s))};
  return normal_form(s);
}

NormalForm thermal(double nbar) {
  CaseSpec s;
  s.nbar = nbar;
  return normal_form(s);
}

}  // namespace

TEST_CASE("negativity of grids") {
  const auto th = sample_grid(thermal(1.0), 0.5, GridSpec::square(6, 241));
  CHECK(wigner_negativity(th) == 0.0);
  auto unnorm = th;
  unnorm.norm = 0.5;
  CHECK_THROWS_AS(wigner_negativity(unnorm), std::invalid_argument);
  const auto q = sample_grid(thermal(1.0), 1.0, GridSpec::square(6, 241));
  CHECK_THROWS_AS(wigner_negativity(q), std::invalid_argument);

  const auto nf = squeeze(Case::bdag_S, 0.0, 0.0);
  const auto g = normalized(sample_grid(nf, 0.5, GridSpec::square(6, 241)), herald_report(nf).probability);
  CHECK(std::abs(wigner_negativity(g) - single_quantum_negativity()) < 1e-3);
}

TEST_CASE("single quantum negativity is squeeze invariant") {
  CHECK(single_quantum_negativity() == doctest::Approx(0.21306131942526685));
  for (double r : {0.0, 0.5, 1.0, 1.5}) {
    CHECK(std::abs(wigner_negativity(squeeze(Case::bdag_S, r, 0.0)) - single_quantum_negativity()) < 1e-4);
    CHECK(std::abs(wigner_negativity(squeeze(Case::S_bdag, r, 1.0)) - 0.038404670670202326) < 1e-4);
  }
}

TEST_CASE("negativity of bdag_U against the Fock-basis Wigner integral") {
  // qutip Wigner of the composed state on a 701^2 grid, xi = 0.5, nbar = 1, P_L = 0.
  CHECK(std::abs(wigner_negativity(measured(Case::bdag_U, 0.5, 1.0)) - 0.09224960012805146) < 1e-4);
}

TEST_CASE("non-classical depth") {
  for (double n : {0.0, 1.0, 3.0}) CHECK(nonclassical_depth(thermal(n)) == 0.0);
  for (double r : {0.0, 0.7, 1.5}) CHECK(std::abs(nonclassical_depth(squeeze(Case::bdag_S, r, 1.0)) - 1.0) < 2e-3);

  double prev_up = 1.0, prev_down = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    const double up = nonclassical_depth(squeeze(Case::S_bdag, r, 1.0));
    const double down = nonclassical_depth(squeeze(Case::S_b, r, 1.0));
    CHECK(up > 0.5);
    CHECK(up < prev_up);
    CHECK(down < 0.5);
    CHECK(down > prev_down);
    prev_up = up;
    prev_down = down;
  }
  CHECK(std::abs(prev_up - 0.5) < 0.05);
  CHECK(std::abs(prev_down - 0.5) < 0.05);
}

TEST_CASE("heating lowers negativity and depth") {
  const auto nf = measured(Case::bdag_U, 0.5, 1.0, 1e-4);
  const double d0 = nonclassical_depth(nf);
  double prev_delta = wigner_negativity(nf);
  for (double th : {0.05, 0.1, 0.2}) {
    const double delta = wigner_negativity(nf, th);
    CHECK(delta < prev_delta);
    prev_delta = delta;
    CHECK(std::abs(d0 - nonclassical_depth(nf, th) - th) < 2e-3);
  }
  CHECK(nonclassical_depth(nf, 1.2) == 0.0);
}

TEST_CASE("cat fidelity functional") {
  const auto cat = odd_cat_dm({0.0, 1.5}, 64);
  const auto best = cat_fidelity(cat);
  CHECK(best.fidelity == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(best.q == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(best.p_cat == doctest::Approx(std::sqrt(2.0) * best.q));
  CHECK_FALSE(best.degenerate);

  // The functional agrees with the direct overlap.
  CaseSpec s;
  s.kind = Case::bdag_U;
  s.nbar = 1.0;
  s.chi = 1.0;
  const auto rho = oracle_state(s);
  for (double q : {0.4, 1.1, 2.3}) {
    const auto c = odd_cat_dm({0.0, q}, rho.dim());
    const double direct = (c.elements * rho.elements).trace().real() / rho.trace();
    CHECK(cat_fidelity_at(rho, {0.0, q}) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("analytic continuation of the cross term matches the oracle") {
  for (const auto& nf : {measured(Case::bdag_U, 0.9, 1.0), measured(Case::U_bdag, 0.6, 0.5, 1e-4),
                         squeeze(Case::b_S, 0.5, 1.0), squeeze(Case::S_b, 0.8, 1.0)}) {
    CaseSpec s;
    s.kind = nf.kind;
    s.nbar = nf.nbar;
    s.outcome = nf.outcome;
    if (is_squeeze_case(nf.kind)) s.squeeze_r = nf.xi_eff;
    else s.chi = nf.chi;
    const auto rho = oracle_state(s);
    const auto q = QuasiProbability::create(nf, 1.0);
    const double p = herald_report(nf).probability;
    for (std::complex<double> beta : {std::complex<double>(0.0, 0.7), std::complex<double>(0.0, 1.9),
                                      std::complex<double>(0.4, 1.2)})
      CHECK(cat_fidelity_at(*q, p, beta) == doctest::Approx(cat_fidelity_at(rho, beta)).epsilon(1e-6));
  }
}

TEST_CASE("cat fidelity of bdag_U and b_S against brute-force search") {
  const auto a = cat_fidelity(measured(Case::bdag_U, 0.9, 1.0));
  CHECK(a.fidelity == doctest::Approx(0.66729550623771).epsilon(1e-6));
  CHECK(a.q == doctest::Approx(1.8920050813286458).epsilon(1e-3));
  CHECK_FALSE(a.searched_2d);
  const auto b = cat_fidelity(squeeze(Case::b_S, 0.5, 1.0));
  CHECK(b.fidelity == doctest::Approx(0.29819131851976544).epsilon(1e-6));
}

TEST_CASE("asymmetric states fall back to a two-dimensional search") {
  CaseSpec s;
  s.kind = Case::bdag_U;
  s.nbar = 0.5;
  s.chi = 1.0;
  s.outcome = FixedOutcome{0.9};
  const auto nf = normal_form(s);
  const auto best = cat_fidelity(nf);
  CHECK(best.searched_2d);
  const auto rho = oracle_state(s);
  CHECK(best.fidelity == doctest::Approx(cat_fidelity_at(rho, best.beta)).epsilon(1e-6));
}

TEST_CASE("states closest to a single quantum report a degenerate optimum") {
  CaseSpec s;
  s.kind = Case::bdag_S;
  s.nbar = 0.0;
  const auto best = cat_fidelity(normal_form(s));
  CHECK(best.fidelity > 0.999);
  CHECK(best.degenerate);
  CHECK(best.q < 0.05);
}

TEST_CASE("squeezed Fock fidelity") {
  for (double n : {0.5, 1.0, 3.0}) {
    const auto weak = effective_params(1e-4, n);
    CHECK(std::abs(squeezed_fock_fidelity(weak.xi, weak.mbar) - 1.0 / (1.0 + n)) < 1e-6);
    const auto strong = effective_params(1e3, n);
    CHECK(squeezed_fock_fidelity(strong.xi, strong.mbar) >= 0.999);
    double prev = 0.0;
    for (double chi = 0.0; chi <= 6.0; chi += 0.25) {
      const auto e = effective_params(chi, n);
      const double f = squeezed_fock_fidelity(e.xi, e.mbar);
      CHECK(f > prev);
      prev = f;
    }
  }
  CHECK_THROWS_AS(squeezed_fock_fidelity(squeeze(Case::bdag_S, 0.5, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(squeezed_fock_fidelity(measured(Case::bdag_U, 0.5, 1.0, 1e-4)), std::invalid_argument);
}

TEST_CASE("squeezed Fock overlap against the oracle") {
  const auto e = effective_params(1.1665, 1.0);
  CHECK(squeezed_fock_overlap(e.xi, e.mbar) == doctest::Approx(0.5747952268459465).epsilon(1e-9));
  CaseSpec s;
  s.kind = Case::bdag_U;
  s.nbar = 1.0;
  s.chi = 1.1665;
  const auto nf = normal_form(s);
  CHECK(squeezed_fock_overlap_oracle(oracle_state(s), e.xi) == doctest::Approx(squeezed_fock_overlap(e.xi, e.mbar)).epsilon(1e-6));
  CHECK(squeezed_fock_fidelity(nf) == doctest::Approx((1 + e.mbar) * squeezed_fock_overlap(e.xi, e.mbar)));
}

TEST_CASE("metrics report") {
  const auto rep = compute_metrics(measured(Case::bdag_U, 0.5, 1.0), {0.0, true, 401});
  CHECK(rep.negativity_ratio == doctest::Approx(rep.wigner_negativity / single_quantum_negativity()));
  CHECK(rep.nonclassical_depth > 0.5);
  REQUIRE(rep.cat);
  REQUIRE(rep.squeezed_fock_fidelity);
}

TEST_CASE("negativity is refined by grid doubling") {
  const auto nf = squeeze(Case::bdag_S, 0.5, 0.0);
  const double fine = wigner_negativity(nf);
  CHECK(std::abs(fine - single_quantum_negativity()) < 2e-5);
  CHECK_THROWS_AS(wigner_negativity(nf, 0.0, 11), GridNotConverged);
}
