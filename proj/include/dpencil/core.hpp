#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpencil {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Input that violates a documented precondition (delay ranges, domains, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure that failed to converge or was singular.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Delays and discretisation knobs shared by every module.
///
/// The delays must satisfy pi/3 <= a0 < pi, pi/2 <= a1 < pi and a0 + a1 >= pi.
/// `full_inversion` is derived (a0 >= 2pi/5) and set by validate_config().
struct ProblemConfig {
  double a0 = 2.0;
  double a1 = 2.0;
  int grid_size = 512;      // samples per unit length
  double tolerance = 1e-8;  // numerical convergence target
  bool full_inversion = false;
};

ProblemConfig validate_config(ProblemConfig cfg);

/// Number of grid intervals used on an interval of the given length; always even
/// so that interval midpoints are grid nodes.
std::size_t intervals_for(double length, int grid_size);

/// Complex samples on a uniform grid that includes both endpoints. Off-grid
/// values come from linear interpolation, so the object represents a
/// continuous piecewise-linear function.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(double lo, double hi, std::vector<cplx> values);

  static SampledFunction sample(double lo, double hi, std::size_t intervals,
                                const std::function<cplx(double)>& f);
  static SampledFunction zeros(double lo, double hi, std::size_t intervals);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  std::size_t intervals() const { return values_.size() - 1; }
  double node(std::size_t k) const;
  const std::vector<cplx>& values() const { return values_; }
  cplx operator[](std::size_t k) const { return values_[k]; }

  bool contains(double x) const;
  /// Linear interpolation; throws ValidationError outside [lo, hi].
  cplx operator()(double x) const;
  /// Like operator() but returns 0 outside the domain.
  cplx at_or_zero(double x) const;

  /// Index of the cell containing x and the offset of x inside it.
  std::pair<std::size_t, double> locate(double x) const;

  double max_abs() const;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  double step_ = 1.0;
  std::vector<cplx> values_;
};

/// Integral of the piecewise-linear interpolant of f over [lo, hi]
/// (composite trapezoid; partial cells handled exactly). lo > hi negates.
cplx integrate(const SampledFunction& f, double lo, double hi);

/// Exact first and second primitives of a piecewise-linear SampledFunction,
/// taken from its left endpoint. Left of the domain both vanish; right of it
/// the first primitive is constant and the second grows linearly.
class Antiderivative {
 public:
  Antiderivative() = default;
  explicit Antiderivative(const SampledFunction& f);

  cplx first(double x) const;
  cplx second(double x) const;
  /// ∫_a^b f
  cplx between(double a, double b) const { return first(b) - first(a); }

 private:
  SampledFunction f_;
  std::vector<cplx> first_;
  std::vector<cplx> second_;
};

/// Four-point Gauss–Legendre rule on [0, 1].
struct GaussRule {
  static constexpr std::array<double, 4> nodes{0.0694318442029737, 0.3300094782075719,
                                               0.6699905217924281, 0.9305681557970262};
  static constexpr std::array<double, 4> weights{0.1739274225687269, 0.3260725774312731,
                                                 0.3260725774312731, 0.1739274225687269};
};

/// Composite Gauss–Legendre quadrature of f over [a, b] with the given number of
/// equal panels. Returns the negated integral when a > b.
template <class F>
auto gauss_integrate(F&& f, double a, double b, std::size_t panels) {
  using R = decltype(f(a));
  R sum{};
  if (a == b || panels == 0) return sum;
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double left = a + h * static_cast<double>(k);
    for (std::size_t i = 0; i < GaussRule::nodes.size(); ++i)
      sum += GaussRule::weights[i] * f(left + h * GaussRule::nodes[i]);
  }
  return sum * h;
}

/// Panel count giving roughly `per_unit` panels per unit length (at least one).
std::size_t panels_for(double a, double b, double per_unit);

/// Gauss–Legendre over [lo, hi] split at the nodes grid_lo + k*step, so that
/// integrands built from piecewise polynomials on that grid are integrated
/// cell by cell. Each piece uses `sub` panels. Returns 0 when hi <= lo.
template <class F>
auto gauss_on_grid(F&& f, double lo, double hi, double grid_lo, double step, std::size_t sub = 1) {
  using R = decltype(f(lo));
  R sum{};
  if (!(hi > lo)) return sum;
  const double tiny = 1e-13 * (1.0 + std::abs(hi));
  double k = std::floor((lo - grid_lo) / step) + 1.0;
  double a = lo;
  while (true) {
    const double node = grid_lo + k * step;
    const double b = node < hi - tiny ? node : hi;
    if (b - a > tiny) sum += gauss_integrate(f, a, b, sub);
    if (b >= hi) break;
    a = b;
    k += 1.0;
  }
  return sum;
}

/// The two potentials of the pencil. q0 lives on [a0, pi]; q1 and its
/// derivative p live on [a1, pi]. Both vanish left of their delay.
///
/// p is the primary sampled object for the second potential: q1 is its exact
/// primitive normalised to zero mean, so q1 is piecewise quadratic and
/// consistent with p to rounding.
class PotentialPair {
 public:
  PotentialPair() = default;

  /// q1 is rebuilt from p with the zero-mean normalisation.
  static PotentialPair from_derivative(const ProblemConfig& cfg, SampledFunction q0,
                                       SampledFunction p);
  /// p is obtained by second-order differentiation of the q1 samples, then q1 is
  /// rebuilt from p. Rejects q1 whose mean is not zero.
  static PotentialPair from_samples(const ProblemConfig& cfg, SampledFunction q0,
                                    const SampledFunction& q1);
  /// Samples q0 and p = q1' on the default grids of cfg.
  static PotentialPair from_functions(const ProblemConfig& cfg,
                                      const std::function<cplx(double)>& q0,
                                      const std::function<cplx(double)>& p);
  static PotentialPair zero(const ProblemConfig& cfg);

  const SampledFunction& q0() const { return q0_; }
  const SampledFunction& q1() const { return q1_; }
  const SampledFunction& p() const { return p_; }
  double a0() const { return q0_.lo(); }
  double a1() const { return q1_.lo(); }

  /// q0 with the zero extension left of a0.
  cplx q0_at(double x) const { return q0_.at_or_zero(x); }
  /// q1 evaluated exactly as the primitive of the interpolated p.
  cplx q1_at(double x) const;

  /// omega = (1/2) ∫ q0
  cplx omega() const;
  cplx alpha() const { return q1_.values().front() / 2.0; }
  cplx beta() const { return q1_.values().back() / 2.0; }
  cplx alpha0() const { return alpha() + beta(); }
  cplx alpha1() const { return alpha() - beta(); }

 private:
  SampledFunction q0_, q1_, p_;
  Antiderivative p_prim_;
};

/// Builds zero-mean q1 on p's grid from p:
///   q1(x) = 1/(pi-a1) ∫_{a1}^{pi} ∫_t^{pi} p - ∫_x^{pi} p.
SampledFunction zero_mean_primitive(const SampledFunction& p);

/// Unperturbed eigenvalue n - j/2.
inline double anchor(int n, int j) { return static_cast<double>(n) - 0.5 * j; }

/// Eigenvalues of one boundary problem (y(0) = y^{(j)}(pi) = 0) indexed by n.
/// Indices run over n != 0 for j = 0 and over all integers for j = 1. A
/// spectrum "up to N" holds 0 < |n| <= N for j = 0 and 1 - N <= n <= N for
/// j = 1, so in both cases the anchors n - j/2 form a symmetric set.
struct Spectrum {
  int j = 0;
  std::map<int, cplx> entries;
  /// Problems found while computing the spectrum (zero-count mismatches, ...).
  std::vector<std::string> diagnostics;

  static Spectrum anchors(int j, int max_index);
  static std::vector<int> indices(int j, int max_index);
  /// Largest N such that every index of the range "up to N" is present.
  int complete_up_to() const;
  cplx at(int n) const;
};

/// omega, alpha_0, alpha_1 of the eigenvalue asymptotics and derived alpha, beta.
struct ParameterEstimate {
  cplx omega{};
  cplx alpha0{};
  cplx alpha1{};
  cplx alpha{};
  cplx beta{};
  double residual_l2 = 0.0;
  /// Standard error of the least-squares fit (largest over the three unknowns).
  double uncertainty = 0.0;

  static ParameterEstimate from(cplx omega, cplx alpha0, cplx alpha1, double residual = 0.0);
  static ParameterEstimate from_potentials(const PotentialPair& pp);
};

/// Runs fn(0..count-1) on a pool of std::threads. Iterations must be
/// independent; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// sin(z)/z, accurate near zero.
cplx sinc(cplx z);

/// Relative L2 distance ||a - b|| / ||b|| on b's grid.
double relative_l2(const SampledFunction& a, const SampledFunction& b);
/// Sup-norm distance evaluated on b's nodes.
double sup_distance(const SampledFunction& a, const SampledFunction& b);

}  // namespace dpencil
