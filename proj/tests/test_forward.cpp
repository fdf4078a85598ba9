#include "doctest.h"

#include "dpencil/forward.hpp"
#include "dpencil/samples.hpp"

using namespace dpencil;

namespace {

ProblemConfig trig_config() {
  ProblemConfig cfg;
  cfg.a0 = 2.0;
  cfg.a1 = 1.9;
  return validate_config(cfg);
}

struct TrigSetup {
  ProblemConfig cfg = trig_config();
  PotentialPair pp = samples::trig(cfg);
  KernelTable kt = build_kernels(pp, cfg);
  WTable wt = compute_w_from_potentials(pp, kt, cfg);
};

const TrigSetup& trig() {
  static const TrigSetup s;
  return s;
}

}  // namespace

TEST_CASE("zero potentials give the unperturbed characteristic functions") {
  const ProblemConfig cfg = trig_config();
  const WTable wt = WTable::zero(cfg);
  for (cplx rho : {cplx{0.7}, cplx{2.3, -0.4}, cplx{11.0, 1.0}}) {
    CHECK(std::abs(evaluate_delta(0, rho, wt, cfg) - std::sin(rho * kPi) / rho) < 1e-12);
    CHECK(std::abs(evaluate_delta(1, rho, wt, cfg) - std::cos(rho * kPi)) < 1e-12);
  }
  CHECK(std::abs(evaluate_delta(0, cplx{0.0}, wt, cfg) - kPi) < 1e-12);

  const auto est = ParameterEstimate::from(0.0, 0.0, 0.0);
  for (int j = 0; j < 2; ++j) {
    const Spectrum s = compute_spectrum(j, 5, wt, est, cfg);
    for (int n : Spectrum::indices(j, 5)) CHECK(std::abs(s.at(n) - anchor(n, j)) < 1e-10);
  }
}

// Reference values from direct nested quadrature of the delayed equation.
TEST_CASE("Delta matches the delayed Volterra solution") {
  const auto& t = trig();
  struct Ref {
    cplx rho, d0, d1;
  };
  const Ref refs[] = {
      {{2.5, 0.0}, {0.476337245376, 0.0}, {-0.215270208338, 0.0}},
      {{1.0, 0.5}, {-0.756790564129, -1.861602070012}, {-2.462225218976, -0.174211929579}},
      {{0.0, 0.0}, {3.322232013998, 0.0}, {1.411575879504, 0.0}},
  };
  for (const auto& r : refs) {
    CHECK(std::abs(evaluate_delta(0, r.rho, t.wt, t.cfg) - r.d0) < 1e-6);
    CHECK(std::abs(evaluate_delta(1, r.rho, t.wt, t.cfg) - r.d1) < 1e-6);
    const auto [s, ds] = solve_S_volterra(kPi, r.rho, t.pp, t.cfg);
    CHECK(std::abs(s - r.d0) < 1e-9);
    CHECK(std::abs(ds - r.d1) < 1e-9);
  }
  const cplx rho{3.2, 0.3};
  CHECK(std::abs(S_from_kernels(rho, t.kt) - solve_S_volterra(kPi, rho, t.pp, t.cfg).first) < 1e-6);
}

TEST_CASE("derivative of Delta") {
  const auto& t = trig();
  const cplx rho{1.7, 0.2};
  const double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    const auto [d, dd] = evaluate_delta_with_derivative(j, rho, t.wt);
    CHECK(std::abs(d - evaluate_delta(j, rho, t.wt, t.cfg)) < 1e-12);
    const cplx fd = (evaluate_delta(j, rho + h, t.wt, t.cfg) - evaluate_delta(j, rho - h, t.wt, t.cfg)) / (2.0 * h);
    CHECK(std::abs(dd - fd) < 1e-7);
  }
}

TEST_CASE("low zeros of the trig pair") {
  const auto& t = trig();
  const auto est = ParameterEstimate::from_potentials(t.pp);
  const Spectrum s0 = compute_spectrum(0, 4, t.wt, est, t.cfg);
  const Spectrum s1 = compute_spectrum(1, 4, t.wt, est, t.cfg);
  CHECK(std::abs(s0.at(1) - 1.053001280552) < 1e-6);
  CHECK(std::abs(s0.at(-1) + 1.053001280552) < 1e-6);
  CHECK(std::abs(s0.at(2) - 1.931185120636) < 1e-6);
  CHECK(std::abs(s1.at(1) - 0.568950449789) < 1e-6);
  CHECK(std::abs(s1.at(2) - 1.530236832353) < 1e-6);
  CHECK(std::abs(s1.at(-1) + 1.296622746282) < 1e-6);
  for (int n : Spectrum::indices(0, 4)) CHECK(std::abs(evaluate_delta(0, s0.at(n), t.wt, t.cfg)) < 1e-9);
}

TEST_CASE("argument principle count") {
  const ProblemConfig cfg = trig_config();
  const WTable wt = WTable::zero(cfg);
  // sin(rho pi)/rho: zeros 1, 2, 3 in (0.5, 3.5)
  CHECK(count_zeros(0, wt, 0.5, 3.5, -1.0, 1.0) == 3);
  // cos(rho pi): -1/2, 1/2
  CHECK(count_zeros(1, wt, -0.9, 0.9, -1.0, 1.0) == 2);
}

TEST_CASE("w constants agree with potential moments") {
  const auto& t = trig();
  CHECK(std::abs(t.wt.omega - t.pp.omega()) < 1e-9);
  CHECK(std::abs(integrate(t.wt.w00, 0.0, kPi - t.cfg.a0) - t.wt.omega) < 1e-6);
  CHECK(std::abs(integrate(t.wt.w11, 0.0, kPi - t.cfg.a1) + t.wt.alpha1) < 1e-6);
}
