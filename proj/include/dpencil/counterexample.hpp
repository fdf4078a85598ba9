#pragma once

#include "dpencil/core.hpp"

#include <array>

namespace dpencil {

/// A potential that is sampled piece by piece. Each piece has its own uniform
/// grid whose end nodes sit on the breakpoints, so jumps are kept exactly.
class PiecewiseSampled {
 public:
  PiecewiseSampled() = default;
  /// breakpoints b_0 < ... < b_m; empty pieces (b_{k+1} - b_k below 1e-12) are dropped.
  static PiecewiseSampled sample(const std::vector<double>& breakpoints, int grid_size,
                                 const std::function<cplx(double)>& f);

  double lo() const { return pieces_.front().lo(); }
  double hi() const { return pieces_.back().hi(); }
  const std::vector<SampledFunction>& pieces() const { return pieces_; }
  std::vector<double> breakpoints() const;

  /// Value at x; at a breakpoint the piece on the right wins, at hi the last piece.
  /// Zero outside [lo, hi].
  cplx operator()(double x) const;

  /// ∫_lo^x f(t) g(t) dt, piece by piece with Gauss on each cell.
  template <class G>
  cplx integrate_against(G&& g, double x) const {
    cplx sum{};
    for (const SampledFunction& p : pieces_) {
      const double b = std::min(x, p.hi());
      if (b <= p.lo()) break;
      sum += gauss_on_grid([&](double t) { return p(t) * g(t); }, p.lo(), b, p.lo(), p.step(), 1);
    }
    return sum;
  }

 private:
  std::vector<SampledFunction> pieces_;
};

/// Potentials of -y'' + q1(x) y(x - a1) + q2(x) y(x - a2) = lambda y.
struct TwoDelayPotentials {
  double a1 = 0.0, a2 = 0.0;
  PiecewiseSampled q1, q2;
  cplx omega1{}, omega2{};  // (1/2) ∫ q_nu

  static TwoDelayPotentials from_functions(double a1, double a2, const std::function<cplx(double)>& q1,
                                           const std::function<cplx(double)>& q2,
                                           const ProblemConfig& cfg,
                                           const std::vector<double>& extra_breaks1 = {},
                                           const std::vector<double>& extra_breaks2 = {});
  static TwoDelayPotentials zero(double a1, double a2, const ProblemConfig& cfg);

  const PiecewiseSampled& q(int nu) const { return nu == 1 ? q1 : q2; }
  double a(int nu) const { return nu == 1 ? a1 : a2; }
};

/// Coefficients of U_nu(y) = h_{0,nu} y(0) + h_{1,nu} y'(0) + H_{0,nu} y(pi) + H_{1,nu} y'(pi),
/// stored as h[j][nu - 1], H[j][nu - 1].
struct BoundaryCoeffs {
  std::array<std::array<cplx, 2>, 2> h{};
  std::array<std::array<cplx, 2>, 2> H{};

  /// U_1 = y(0), U_2 = y^{(j)}(pi).
  static BoundaryCoeffs dirichlet(int j);
};

/// The piecewise-constant pair of the counterexample; requires pi/2 <= a1 <= a2 < pi.
TwoDelayPotentials build_example_potentials(double a1, double a2, const ProblemConfig& cfg);

/// L(rho) = Delta_1 + i rho Delta_0 from its exponential representation. |rho| >= 0.1.
cplx regge_char(const TwoDelayPotentials& tp, cplx rho);

/// y and y' at x for the solution with y(0) = init[0], y'(0) = init[1].
/// Since a_nu >= pi/2, every delayed argument x - a_nu stays below a1, where
/// y is still the unperturbed solution: one substitution solves the
/// Volterra equation exactly, leaving a single quadrature.
std::pair<cplx, cplx> solve_two_delay_volterra(double x, cplx rho, const TwoDelayPotentials& tp,
                                               std::array<cplx, 2> init);

/// Delta_j = S^{(j)}(pi) and Theta_j = C^{(j)}(pi) at lambda.
struct CharValues {
  cplx delta0, delta1, theta0, theta1;
};
CharValues char_values(const TwoDelayPotentials& tp, cplx lambda);

/// Delta_0^0, Delta_1^0: the leading parts of Delta_0, Delta_1 fixed by omega_1, omega_2.
std::array<cplx, 2> leading_delta(const TwoDelayPotentials& tp, cplx lambda);

/// Largest residual of Theta_0 = 2 Delta_1^0 - Delta_1 and Theta_1 = lambda (Delta_0 - 2 Delta_0^0),
/// relative to 1 + |terms|.
double theta_identity_residual(const TwoDelayPotentials& tp, cplx lambda);

/// Determinant of the general two-point problem.
cplx general_delta(const TwoDelayPotentials& tp, const BoundaryCoeffs& bc, cplx lambda);

/// Zeros rho_n, n = 1..count, of Delta_j by Newton from the anchors n - j/2.
std::vector<cplx> two_delay_zeros(const TwoDelayPotentials& tp, int j, int count);

struct CounterexampleReport {
  double a1 = 0.0, a2 = 0.0;
  double regge_deviation = 0.0;        // max |L(rho) e^{-i rho pi} - 1| on the rho grid
  std::array<double, 2> zero_deviation{};  // max |rho_n - (n - j/2)|, n <= 20
  double theta_identity = 0.0;          // max residual on the lambda grid
  double delta_swap = 0.0;             // max |general_delta(example) - general_delta(zero)|
  double seconds = 0.0;

  static constexpr double kReggeTolerance = 1e-6;
  static constexpr double kZeroTolerance = 1e-4;
  static constexpr double kIdentityTolerance = 1e-5;

  bool passed() const;
  std::string summary() const;
};

CounterexampleReport verify_counterexample(double a1, double a2, const ProblemConfig& cfg);

}  // namespace dpencil
