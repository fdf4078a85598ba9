#pragma once

// Named potential pairs used by the tests and by the CLI's --example flag.

#include "dpencil/core.hpp"

#include <string>
#include <vector>

namespace dpencil::samples {

struct Case {
  std::string name;
  PotentialPair pp;
};

/// q0 = 0.4; q1 = 0.3 sin(2 pi (x - a1) / (pi - a1)).
inline PotentialPair constant(const ProblemConfig& cfg) {
  const double a1 = cfg.a1, L = kPi - a1;
  return PotentialPair::from_functions(
      cfg, [](double) { return cplx{0.4}; },
      [=](double x) { return cplx{0.3 * 2.0 * kPi / L * std::cos(2.0 * kPi * (x - a1) / L)}; });
}

/// q0 = sin 3x; q1 = 0.5 cos(pi (x - a1) / (pi - a1)).
inline PotentialPair trig(const ProblemConfig& cfg) {
  const double a1 = cfg.a1, L = kPi - a1;
  return PotentialPair::from_functions(
      cfg, [](double x) { return cplx{std::sin(3.0 * x)}; },
      [=](double x) { return cplx{-0.5 * kPi / L * std::sin(kPi * (x - a1) / L)}; });
}

/// q0 steps from 1 to 0.5 at a0 + 0.4 (pi - a0); p = -+0.4 around the middle of [a1, pi].
inline PotentialPair jump(const ProblemConfig& cfg) {
  const double a0 = cfg.a0, a1 = cfg.a1;
  const double step0 = a0 + 0.4 * (kPi - a0), mid1 = 0.5 * (a1 + kPi);
  return PotentialPair::from_functions(
      cfg, [=](double x) { return cplx{x < step0 ? 1.0 : 0.5}; },
      [=](double x) { return cplx{x < mid1 ? -0.4 : 0.4}; });
}

/// q0 as given, q1 = 0: the one-delay problem.
inline PotentialPair single_delay(const ProblemConfig& cfg, const std::function<cplx(double)>& q) {
  return PotentialPair::from_functions(cfg, q, [](double) { return cplx{}; });
}

inline std::vector<Case> all(const ProblemConfig& cfg) {
  return {{"constant", constant(cfg)}, {"trig", trig(cfg)}, {"jump", jump(cfg)}};
}

/// One of "constant", "trig", "jump", "single" (q0 = 0.4, q1 = 0), "zero"; ValidationError otherwise.
inline PotentialPair by_name(const std::string& name, const ProblemConfig& cfg) {
  if (name == "constant") return constant(cfg);
  if (name == "trig") return trig(cfg);
  if (name == "jump") return jump(cfg);
  if (name == "single") return single_delay(cfg, [](double) { return cplx{0.4}; });
  if (name == "zero") return PotentialPair::zero(cfg);
  throw ValidationError("unknown example '" + name + "' (expected constant, trig, jump, single or zero)");
}

}  // namespace dpencil::samples
