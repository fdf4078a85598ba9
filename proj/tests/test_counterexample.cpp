#include "doctest.h"

#include "dpencil/counterexample.hpp"

using namespace dpencil;

TEST_CASE("piecewise sampling keeps jumps") {
  const auto f = PiecewiseSampled::sample({1.0, 2.0, 3.0}, 64, [](double x) { return cplx{x < 2.0 ? 1.0 : -2.0}; });
  CHECK(f(1.999999) == cplx{1.0});
  CHECK(f(2.0) == cplx{-2.0});
  CHECK(f(3.5) == cplx{});
  CHECK(std::abs(f.integrate_against([](double) { return cplx{1.0}; }, 3.0) - cplx{-1.0}) < 1e-13);
  CHECK(std::abs(f.integrate_against([](double t) { return cplx{t}; }, 2.5) - cplx{1.5 - 2.0 * 1.125}) < 1e-13);
}

TEST_CASE("zero potentials") {
  const ProblemConfig cfg;
  const auto tp = TwoDelayPotentials::zero(1.7, 2.0, cfg);
  const cplx lambda{2.25};
  const CharValues v = char_values(tp, lambda);
  CHECK(std::abs(v.delta0 - std::sin(1.5 * kPi) / 1.5) < 1e-13);
  CHECK(std::abs(v.delta1 - std::cos(1.5 * kPi)) < 1e-13);
  CHECK(std::abs(v.theta0 - std::cos(1.5 * kPi)) < 1e-13);
  CHECK(std::abs(regge_char(tp, cplx{2.3, 0.4}) - std::exp(cplx{0.0, 1.0} * cplx{2.3, 0.4} * kPi)) < 1e-12);
}

TEST_CASE("Theta and Delta identities for general potentials") {
  const ProblemConfig cfg;
  const auto tp = TwoDelayPotentials::from_functions(
      1.8, 2.2, [](double x) { return cplx{std::cos(x), 0.1}; }, [](double x) { return cplx{x - 2.5}; }, cfg);
  for (cplx lambda : {cplx{1.0}, cplx{6.25}, cplx{2.0, 3.0}})
    CHECK(theta_identity_residual(tp, lambda) < 1e-10);
}

TEST_CASE("the example has unperturbed spectra") {
  const ProblemConfig cfg;
  const auto tp = build_example_potentials(1.7, 2.0, cfg);
  CHECK(std::abs(tp.omega1) < 1e-12);
  CHECK(std::abs(tp.omega2) < 1e-12);
  for (int j = 0; j < 2; ++j) {
    const auto z = two_delay_zeros(tp, j, 6);
    for (int n = 1; n <= 6; ++n) CHECK(std::abs(z[static_cast<std::size_t>(n - 1)] - anchor(n, j)) < 1e-8);
  }
  const auto zero = TwoDelayPotentials::zero(1.7, 2.0, cfg);
  for (int j = 0; j < 2; ++j) {
    const auto bc = BoundaryCoeffs::dirichlet(j);
    CHECK(std::abs(general_delta(tp, bc, cplx{2.0, 3.0}) - general_delta(zero, bc, cplx{2.0, 3.0})) < 1e-10);
  }
  CHECK_THROWS(build_example_potentials(1.2, 2.0, cfg));
}

TEST_CASE("counterexample verification") {
  const ProblemConfig cfg;
  const CounterexampleReport r = verify_counterexample(1.7, 2.0, cfg);
  CHECK(r.passed());
  CHECK(r.regge_deviation < 1e-10);
  CHECK(r.summary().find("passed=true") != std::string::npos);
}
