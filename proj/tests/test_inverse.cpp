#include "doctest.h"

#include "dpencil/inverse.hpp"
#include "dpencil/samples.hpp"

using namespace dpencil;

namespace {

ProblemConfig make_config(double a0, double a1) {
  ProblemConfig cfg;
  cfg.a0 = a0;
  cfg.a1 = a1;
  return validate_config(cfg);
}

// rho_n = rho0 + (omega cos(rho0 a0) + alpha_j sin(rho0 a1)) / (pi n)
Spectrum synthetic(int j, int N, cplx omega, cplx alpha, const ProblemConfig& cfg) {
  Spectrum s;
  s.j = j;
  for (int n : Spectrum::indices(j, N)) {
    const double r0 = anchor(n, j);
    s.entries[n] = r0 + (omega * std::cos(r0 * cfg.a0) + alpha * std::sin(r0 * cfg.a1)) / (kPi * n);
  }
  return s;
}

Spectrum moved_anchor(int N) {
  Spectrum s = Spectrum::anchors(0, N);
  s.entries[1] = 1.37;
  return s;
}

}  // namespace

TEST_CASE("parameter fit is exact without remainder") {
  const ProblemConfig cfg = make_config(2.0, 1.9);
  const cplx omega{0.3, -0.1}, alpha0{0.2}, alpha1{-0.45, 0.05};
  const ParameterEstimate e =
      estimate_parameters(synthetic(0, 40, omega, alpha0, cfg), synthetic(1, 40, omega, alpha1, cfg), cfg);
  CHECK(std::abs(e.omega - omega) < 1e-10);
  CHECK(std::abs(e.alpha0 - alpha0) < 1e-10);
  CHECK(std::abs(e.alpha1 - alpha1) < 1e-10);
  CHECK(e.residual_l2 < 1e-10);

  CHECK_THROWS_AS(estimate_parameters(Spectrum::anchors(0, 10), Spectrum::anchors(1, 10), cfg), ValidationError);
}

TEST_CASE("rank-deficient design is reported") {
  // a1 = pi lies outside the valid range; sin(rho0 a1) then vanishes at every integer anchor
  ProblemConfig cfg = make_config(2.0, 1.9);
  cfg.a1 = kPi;
  CHECK_THROWS_AS(estimate_parameters(Spectrum::anchors(0, 30), Spectrum::anchors(1, 30), cfg), ValidationError);
}

TEST_CASE("characteristic function from zeros") {
  for (int nt : {3, 20, 200}) {
    const auto d0 = build_delta_from_zeros(Spectrum::anchors(0, nt), nt);
    const auto d1 = build_delta_from_zeros(Spectrum::anchors(1, nt), nt);
    CHECK(std::abs(d0(cplx{0.5}) - 2.0) < 1e-12);
    CHECK(std::abs(d1(cplx{0.3, 0.2}) - std::cos(cplx{0.3, 0.2} * kPi)) < 1e-12);
  }
  const auto d = build_delta_from_zeros(moved_anchor(10), 10);
  CHECK(std::abs(d(cplx{0.5}) - 3.48) < 1e-12);
  // tail anchor beyond the truncation
  CHECK(std::abs(d(cplx{13.0})) < 1e-12);
}

TEST_CASE("solvability verdicts") {
  const ProblemConfig cfg = make_config(2.0, 1.9);
  const SolvabilityReport ok = check_solvability(Spectrum::anchors(0, 40), Spectrum::anchors(1, 40), cfg);
  CHECK(ok.accepted());
  CHECK(ok.residual_l2 < 1e-12);

  const SolvabilityReport bad = check_solvability(moved_anchor(40), Spectrum::anchors(1, 40), cfg);
  CHECK_FALSE(bad.accepted());
  CHECK_FALSE(bad.type_ok[0][0]);
}

TEST_CASE("q0 and p from exact w") {
  const ProblemConfig cfg = make_config(1.35, 1.9);
  for (const auto& c : samples::all(cfg)) {
    CAPTURE(c.name);
    const KernelTable kt(c.pp, cfg);
    const WTable wt = compute_w_from_potentials(c.pp, kt, cfg);
    const SampledFunction q0 = recover_q0(wt, cfg);
    const SampledFunction p = recover_p(wt, cfg);
    CHECK(relative_l2(q0, c.pp.q0()) < 1e-2);
    CHECK(relative_l2(p, c.pp.p()) < 1e-2);
    CHECK(std::abs(integrate(q0, cfg.a0, kPi) - 2.0 * integrate(wt.w00, 0.0, kPi - cfg.a0)) < 1e-6);
  }
}

TEST_CASE("q1 assembly") {
  const ProblemConfig cfg = make_config(2.0, 1.9);
  // p = 2, alpha0 + alpha1 = -(pi - a1): q1 = 2x - (pi + a1)
  const auto p = SampledFunction::sample(cfg.a1, kPi, 64, [](double) { return cplx{2.0}; });
  const auto est = ParameterEstimate::from(0.0, -(kPi - cfg.a1), 0.0);
  const Q1Assembly a = assemble_q1(p, est, 1e-6);
  CHECK(a.consistent);
  CHECK(std::abs(a.q1(2.5) - (5.0 - kPi - cfg.a1)) < 1e-12);
  CHECK_FALSE(assemble_q1(p, ParameterEstimate::from(0.0, 0.3, 0.0), 1e-6).consistent);
}

TEST_CASE("conditional recovery of q0") {
  const ProblemConfig cfg = make_config(1.1, 2.1);
  const auto f = [](double) { return cplx{0.4}; };
  const auto pp = PotentialPair::from_functions(cfg, f, [](double) { return cplx{}; });
  const WTable wt = compute_w_from_potentials(pp, KernelTable(pp, cfg), cfg);
  const double e = kPi / 2 + cfg.a0 / 4;
  const auto known = SampledFunction::sample(1.5 * cfg.a0, e, 64, f);
  const cplx omega0 = 0.4 * (kPi - cfg.a0 - e);
  const SampledFunction q = recover_q0_conditional(wt, known, omega0, cfg);
  CHECK(sup_distance(q, pp.q0()) < 2e-2);

  const ProblemConfig full = make_config(2.0, 1.9);
  CHECK_THROWS_AS(recover_q0_conditional(WTable::zero(full), known, omega0, full), ValidationError);
}

TEST_CASE("small round trip") {
  const ProblemConfig cfg = make_config(2.0, 1.9);
  const PotentialPair pp = samples::trig(cfg);
  const KernelTable kt(pp, cfg);
  const WTable wt = compute_w_from_potentials(pp, kt, cfg);
  const auto est = ParameterEstimate::from_potentials(pp);
  const Spectrum s0 = compute_spectrum(0, 30, wt, est, cfg);
  const Spectrum s1 = compute_spectrum(1, 30, wt, est, cfg);
  const Inversion inv = invert(s0, s1, cfg);
  CHECK(inv.report.accepted());
  CHECK(std::abs(inv.est.omega - pp.omega()) < 1e-3);
  CHECK(relative_l2(inv.q0, pp.q0()) < 0.1);
  CHECK(relative_l2(inv.q1.q1, pp.q1()) < 0.1);
}
