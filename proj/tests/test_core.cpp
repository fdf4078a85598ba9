#include "doctest.h"

#include "dpencil/core.hpp"
#include "dpencil/samples.hpp"

using namespace dpencil;

TEST_CASE("config validation") {
  ProblemConfig cfg;
  cfg.a0 = 2.0;
  cfg.a1 = 1.9;
  CHECK(validate_config(cfg).full_inversion);
  cfg.a0 = 1.1;
  cfg.a1 = 2.1;
  CHECK_FALSE(validate_config(cfg).full_inversion);

  cfg.a0 = 1.0;  // below pi/3
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.a0 = 1.2;
  cfg.a1 = 1.5;  // below pi/2
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.a0 = 1.1;
  cfg.a1 = 1.9;  // a0 + a1 < pi
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.a1 = 2.1;
  cfg.grid_size = 2;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
}

TEST_CASE("grid intervals are even") {
  for (double len : {0.3, 1.0, kPi - 2.0, 2.7})
    for (int g : {4, 17, 512}) CHECK(intervals_for(len, g) % 2 == 0);
  CHECK(intervals_for(1.0, 512) == 512);
}

TEST_CASE("sampled functions interpolate and integrate linear data exactly") {
  const auto f = SampledFunction::sample(1.0, 3.0, 8, [](double x) { return cplx{2.0 * x - 1.0, x}; });
  CHECK(std::abs(f(1.3) - cplx{1.6, 1.3}) < 1e-14);
  CHECK(std::abs(integrate(f, 1.0, 3.0) - cplx{6.0, 4.0}) < 1e-13);
  CHECK(std::abs(integrate(f, 1.2, 2.9) - cplx{2.9 * 2.9 - 2.9 - 1.2 * 1.2 + 1.2, 0.5 * (2.9 * 2.9 - 1.2 * 1.2)}) < 1e-13);
  CHECK_THROWS_AS(f(3.5), ValidationError);
  CHECK(f.at_or_zero(0.5) == cplx{});

  const Antiderivative F(f);
  CHECK(std::abs(F.first(2.0) - cplx{2.0, 1.5}) < 1e-13);
  // ∫_1^2 (t^2 - t) dt
  CHECK(std::abs(F.second(2.0).real() - 5.0 / 6.0) < 1e-12);
}

TEST_CASE("gauss quadrature") {
  const auto cubic = [](double x) { return cplx{x * x * x - 2.0 * x}; };
  CHECK(std::abs(gauss_integrate(cubic, 0.0, 2.0, 1) - cplx{0.0}) < 1e-13);
  const auto e = [](double x) { return cplx{std::exp(x)}; };
  CHECK(std::abs(gauss_on_grid(e, 0.1, 1.7, 0.0, 0.25) - cplx{std::exp(1.7) - std::exp(0.1)}) < 1e-12);
  CHECK(gauss_on_grid(e, 1.0, 1.0, 0.0, 0.25) == cplx{});
}

TEST_CASE("sinc") {
  CHECK(std::abs(sinc(cplx{0.0}) - 1.0) < 1e-16);
  CHECK(std::abs(sinc(cplx{1e-9}) - 1.0) < 1e-16);
  CHECK(std::abs(sinc(cplx{2.0, 1.0}) - std::sin(cplx{2.0, 1.0}) / cplx{2.0, 1.0}) < 1e-15);
}

TEST_CASE("zero-mean primitive") {
  const auto p = SampledFunction::sample(1.9, kPi, 64, [](double x) { return cplx{std::cos(x)}; });
  const SampledFunction q1 = zero_mean_primitive(p);
  // mean removed from the exact primitive; the node samples carry O(h^2)
  CHECK(std::abs(integrate(q1, 1.9, kPi)) < 1e-4);
  // q1(pi) - q1(a1) = ∫ p
  CHECK(std::abs(q1.values().back() - q1.values().front() - integrate(p, 1.9, kPi)) < 1e-12);
}

TEST_CASE("potential pair constants") {
  ProblemConfig cfg;
  cfg.a0 = 2.0;
  cfg.a1 = 1.9;
  cfg = validate_config(cfg);
  const PotentialPair c = samples::constant(cfg);
  CHECK(std::abs(c.omega() - 0.2 * (kPi - 2.0)) < 1e-12);
  CHECK(std::abs(c.alpha0()) < 1e-5);
  CHECK(std::abs(c.alpha1()) < 1e-5);

  // q1 = 0.5 cos(pi (x - a1) / (pi - a1)): alpha = 1/4, beta = -1/4
  const PotentialPair t = samples::trig(cfg);
  CHECK(std::abs(t.omega() - (std::cos(6.0) + 1.0) / 6.0) < 1e-6);
  CHECK(std::abs(t.alpha0()) < 1e-5);
  CHECK(std::abs(t.alpha1() - 0.5) < 1e-5);

  const ParameterEstimate e = ParameterEstimate::from_potentials(t);
  CHECK(std::abs(e.alpha - 0.25) < 1e-5);
  CHECK(std::abs(e.beta + 0.25) < 1e-5);

  const auto bad = SampledFunction::sample(1.9, kPi, 64, [](double) { return cplx{1.0}; });
  CHECK_THROWS_AS(PotentialPair::from_samples(cfg, c.q0(), bad), ValidationError);
}

TEST_CASE("spectrum indexing") {
  CHECK(Spectrum::indices(0, 3).size() == 6);
  CHECK(Spectrum::indices(1, 3).size() == 6);
  CHECK(Spectrum::indices(1, 3).front() == -2);
  const Spectrum s = Spectrum::anchors(1, 5);
  CHECK(s.complete_up_to() == 5);
  CHECK(s.at(0) == cplx{-0.5});
  CHECK_THROWS_AS(s.at(6), ValidationError);
}

TEST_CASE("error norms") {
  const auto f = SampledFunction::sample(0.0, 1.0, 10, [](double x) { return cplx{x}; });
  const auto g = SampledFunction::sample(0.0, 1.0, 10, [](double x) { return cplx{x + 0.1}; });
  CHECK(relative_l2(f, f) == 0.0);
  CHECK(std::abs(sup_distance(g, f) - 0.1) < 1e-14);
}
