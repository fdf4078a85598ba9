#pragma once

#include "dpencil/core.hpp"
#include "dpencil/inverse.hpp"

namespace dpencil {

/// Eigenvalues lambda_{n,j}, n >= 1, of -y'' + q(x) y(x - a) = lambda y with
/// y(0) = y^{(j)}(pi) = 0.
struct SLSpectrum {
  int j = 0;
  std::map<int, cplx> entries;

  static SLSpectrum anchors(int j, int max_index);
  /// Largest N with every index 1..N present.
  int complete_up_to() const;
  cplx at(int n) const;
};

/// Squares the zeros n >= 1 of a pencil spectrum with q1 = 0.
SLSpectrum sl_from_pencil(const Spectrum& s);

/// Unperturbed eigenvalue (n - j/2)^2.
inline double sl_anchor(int n, int j) { return anchor(n, j) * anchor(n, j); }

/// Delta_j(rho) = pi^{1-j} prod (lambda_n - rho^2) / (n - j/2)^2, as the
/// closed form of the unperturbed problem times the finite product of
/// (lambda_n - rho^2) / ((n - j/2)^2 - rho^2). With an omega, the
/// eigenvalues for N < n <= 8N come from the asymptotics.
class SLCharFn {
 public:
  SLCharFn() = default;
  SLCharFn(const SLSpectrum& s, int n_trunc);
  SLCharFn(const SLSpectrum& s, int n_trunc, cplx omega, double a);

  int j() const { return j_; }
  cplx operator()(cplx rho) const;

 private:
  int j_ = 0;
  std::vector<cplx> lambda_;  // lambda_{n}, n = 1..size
};

SLCharFn sl_delta_from_eigs(const SLSpectrum& s, int n_trunc);

/// Pencil configuration for a single delay a: a0 = a and a placeholder a1
/// that satisfies the pencil's constraints. The q1 channel is never used.
ProblemConfig sl_config(double a, const ProblemConfig& base);

/// omega from pi n (sqrt(lambda_n) - (n - j/2)) ~ omega cos((n - j/2) a) on
/// the upper half of the common range, then refined in the theta domain.
ParameterEstimate sl_estimate_omega(const SLSpectrum& s0, const SLSpectrum& s1, double a);

SolvabilityReport sl_check_solvability(const SLSpectrum& s0, const SLSpectrum& s1, double a,
                                       const ProblemConfig& cfg);

/// q on [a, pi].
SampledFunction sl_invert(const SLSpectrum& s0, const SLSpectrum& s1, double a,
                          const ProblemConfig& cfg);

}  // namespace dpencil
