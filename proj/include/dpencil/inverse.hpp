#pragma once

#include "dpencil/core.hpp"
#include "dpencil/forward.hpp"

namespace dpencil {

/// Least-squares fit of gamma_{n,j} = pi n (rho_{n,j} - rho0_{n,j}) against
/// omega cos(rho0 a0) + alpha_j sin(rho0 a1), jointly over both spectra.
///
/// Only the upper half N/2 < |n| <= N of the common range enters the fit:
/// the remainder kappa_n is largest for small |n| and would bias the
/// estimates. Throws ValidationError when the design matrix is rank deficient.
ParameterEstimate estimate_parameters(const Spectrum& s0, const Spectrum& s1,
                                      const ProblemConfig& cfg);

/// Second pass on (omega, alpha0, alpha1) in the theta domain. theta_j is
/// affine in the constants, and for consistent data it is the transform of
/// w supported on [0, pi - a_nu], whose samples decay like boundary terms
/// over n. A constant error instead leaves a non-decaying cos/sin term that
/// the Fourier inversion turns into a spike at pi - a_nu. The fit runs over
/// N/2 < |n| <= N with the boundary terms as nuisance columns; `passes`
/// repeats it with the asymptotic tail rebuilt from the new estimate.
ParameterEstimate refine_parameters(const Spectrum& s0, const Spectrum& s1,
                                    const ParameterEstimate& est, const ProblemConfig& cfg,
                                    int passes = 2);

/// Delta_j rebuilt from its zeros: the given zeros for indices up to n_trunc,
/// unperturbed anchors beyond. The anchor tail is folded in exactly through
/// the closed form rho^{j-1} c_{1-j}(rho pi).
///
/// With an estimate, the zeros for n_trunc < |n| <= kTailFactor * n_trunc
/// are taken from the two-term asymptotics instead of the anchors. Without
/// it, rho Delta_1(rho) near rho = n_trunc is off by O(omega, alpha_1), which
/// is the size of theta_1 itself.
class CharFnFromZeros {
 public:
  static constexpr int kTailFactor = 8;

  CharFnFromZeros() = default;
  CharFnFromZeros(Spectrum zeros, int n_trunc);
  CharFnFromZeros(Spectrum zeros, int n_trunc, const ParameterEstimate& tail,
                  const ProblemConfig& cfg);

  int j() const { return zeros_.j; }
  int n_trunc() const { return n_trunc_; }
  const Spectrum& zeros() const { return zeros_; }

  cplx operator()(cplx rho) const;

 private:
  Spectrum zeros_;
  int n_trunc_ = 0;
  std::vector<int> idx_;
  std::vector<cplx> rho_;
};

CharFnFromZeros build_delta_from_zeros(const Spectrum& z, int n_trunc);
CharFnFromZeros build_delta_from_zeros(const Spectrum& z, int n_trunc, const ParameterEstimate& tail,
                                       const ProblemConfig& cfg);

/// theta_j(rho); the leading terms of rho^{2-j} Delta_j and the asymptotic
/// constants removed.
cplx theta_value(const CharFnFromZeros& d, const ParameterEstimate& est, cplx rho,
                 const ProblemConfig& cfg);

struct ThetaSamples {
  int j = 0;
  std::map<int, cplx> values;  // theta_j(n), |n| <= N

  int max_index() const { return values.empty() ? 0 : values.rbegin()->first; }
};

ThetaSamples compute_theta_samples(const CharFnFromZeros& d, const ParameterEstimate& est, int N,
                                   const ProblemConfig& cfg);

/// Raw truncated Fourier series of the samples on [0, hi]:
/// (1/pi) sum theta(n) cos nx  (cosine) or  (1/pi) sum theta(n) sin nx.
SampledFunction theta_series(const ThetaSamples& t, bool cosine, double hi, std::size_t intervals);

/// w_{j,nu} from the theta samples, restricted to [0, pi - a_nu]. The
/// asymptotic constants are read from the n = 0 samples and the first moments.
WTable fourier_invert_w(const ThetaSamples& t0, const ThetaSamples& t1, const ProblemConfig& cfg);

/// L2 masses of the two series of theta_j on [0, pi]: the total, and for
/// each nu the part of the (j,nu) series on (pi - a_nu, pi). A guard band of
/// width 4 pi / N right of pi - a_nu is left out, since the truncated series
/// of a function with a jump at the edge still rings there.
struct SupportMass {
  double total = 0.0;
  std::array<double, 2> tail{};
};
SupportMass support_mass(const ThetaSamples& t, const ProblemConfig& cfg);

/// Tail masses of both theta_j as fractions of the combined mass of all four
/// series. Several w's vanish for some potentials (w10 for constants, both
/// j = 1 series when q1 = 0), so a per-series ratio would compare rounding
/// noise with rounding noise; the denominator is also floored at
/// pi * tolerance^2 for the same reason.
std::array<std::array<double, 2>, 2> support_tail_fractions(const SupportMass& m0, const SupportMass& m1,
                                                            const ProblemConfig& cfg);

/// q0 on [a0, pi] from w_{0,0}, w_{1,0}. Requires a0 >= 2 pi / 5.
SampledFunction recover_q0(const WTable& wt, const ProblemConfig& cfg);
/// v on (3a0/2, pi - a0/2), built from q0 on [a0, 3a0/2] u [pi - a0/2, pi]
/// as read off the w-functions. Exposed for tests.
cplx v_term(double x, const WTable& wt);

/// p = q1' on [a1, pi] from w_{0,1}, w_{1,1}.
SampledFunction recover_p(const WTable& wt, const ProblemConfig& cfg);

struct Q1Assembly {
  SampledFunction q1;
  double discrepancy = 0.0;  // sup distance to the zero-mean primitive of p
  bool consistent = true;
};

/// q1 = alpha0 + alpha1 + ∫_{a1}^x p, checked against the zero-mean
/// primitive of p; flagged inconsistent when they differ by more than
/// 10 * tolerance.
Q1Assembly assemble_q1(const SampledFunction& p, const ParameterEstimate& est, double tolerance);

struct SolvabilityReport {
  bool asymptotics_ok = true;
  double residual_l2 = 0.0;
  double growth_ratio = 0.0;  // max n|eps_n| on the top half over the quarter below
  std::array<std::array<bool, 2>, 2> type_ok{{{true, true}, {true, true}}};
  std::array<std::array<double, 2>, 2> tail_fraction{};
  std::array<std::array<bool, 2>, 2> symmetry_ok{{{true, true}, {true, true}}};
  std::array<cplx, 2> gamma_residual{};
  std::array<bool, 2> gamma_ok{true, true};
  int N = 0;

  bool accepted() const;
  std::string summary() const;
};

inline constexpr double kResidualThreshold = 0.5;
inline constexpr double kTailThreshold = 1e-3;
inline constexpr double kGammaThreshold = 1e-2;

SolvabilityReport check_solvability(const Spectrum& s0, const Spectrum& s1,
                                    const ProblemConfig& cfg);

/// Everything produced by one run of the reconstruction from two spectra.
struct Inversion {
  ParameterEstimate fit;  // least-squares fit on the eigenvalues
  ParameterEstimate est;  // after refine_parameters; used for everything else
  WTable wt;
  SampledFunction q0, p;
  Q1Assembly q1;
  SolvabilityReport report;
  int N = 0;
};

/// Reconstruction from two spectra. The solvability report is always filled
/// in; q0 is recovered only when a0 >= 2 pi / 5. Throws nothing on data that
/// fails the report: callers decide.
Inversion invert(const Spectrum& s0, const Spectrum& s1, const ProblemConfig& cfg);

/// q0 on [a0, pi] for pi/3 <= a0 < 2pi/5, given q0 on (3a0/2, pi/2 + a0/4)
/// and omega0 = ∫_{pi/2 + a0/4}^{pi - a0} q0.
SampledFunction recover_q0_conditional(const WTable& wt, const SampledFunction& q0_known,
                                       cplx omega0, const ProblemConfig& cfg);

}  // namespace dpencil
