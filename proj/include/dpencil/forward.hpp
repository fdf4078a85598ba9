#pragma once

#include "dpencil/core.hpp"

#include <utility>

namespace dpencil {

/// Transformation-operator kernels of the pencil.
///
/// K1 is explicit. K0 is explicit too once its correction A is known, and A
/// only needs K0(tau - a0, eta) with eta <= 2 a0, where K0 has a closed form.
/// Kernel values are therefore computed on demand from exact primitives of
/// q0 and q1 rather than by iterating the integral equation. `tabulate_*`
/// sample them on the potential grids.
class KernelTable {
 public:
  KernelTable() = default;
  KernelTable(const PotentialPair& pp, const ProblemConfig& cfg);

  const PotentialPair& potentials() const { return pp_; }
  double a0() const { return a0_; }
  double a1() const { return a1_; }

  /// Q0(x) = ∫_{a0}^x q0 and its own primitive.
  cplx Q0(double x) const { return q0_prim_.first(x); }
  cplx QQ0(double x) const { return q0_prim_.second(x); }
  /// Q1(x) = ∫_{a1}^x q1 (q1 piecewise quadratic, integrated exactly).
  cplx Q1(double x) const;

  cplx K0(double x, double t) const;
  cplx K1(double x, double t) const;
  cplx A(double x, double t) const;
  /// Closed form of K0(tau - a0, eta), valid for eta <= 2 a0; zero outside
  /// the triangle a0 <= eta <= tau - a0.
  cplx K0_shifted(double tau, double eta) const;
  /// ∫_{a0}^{m} K0(tau - a0, eta) d eta, with m clipped to the triangle.
  cplx K0_shifted_integral(double tau, double m) const;

  /// Q0 and Q1 on the grids of q0 and q1.
  SampledFunction Q0_table() const;
  SampledFunction Q1_table() const;

  /// Row-major lower triangle of K on the grid nodes x_k, t_l (l <= k) of
  /// the corresponding potential grid, thinned by `stride`.
  std::vector<std::vector<cplx>> tabulate_K0(std::size_t stride = 1) const;
  std::vector<std::vector<cplx>> tabulate_K1(std::size_t stride = 1) const;
  std::vector<std::vector<cplx>> tabulate_A(std::size_t stride = 1) const;

 private:
  PotentialPair pp_;
  Antiderivative q0_prim_;
  Antiderivative p_prim_;
  double a0_ = 0.0, a1_ = 0.0;
};

KernelTable build_kernels(const PotentialPair& pp, const ProblemConfig& cfg);

/// The four functions w_{j,nu} on [0, pi - a_nu] and the asymptotic constants.
struct WTable {
  SampledFunction w00, w01, w10, w11;
  cplx omega{}, alpha0{}, alpha1{};
  double a0 = 0.0, a1 = 0.0;

  const SampledFunction& w(int j, int nu) const;
  static WTable zero(const ProblemConfig& cfg);
};

/// u_j of the nu = 0 subsystem, evaluated at x in [0, pi - a0].
cplx u_term(int j, double x, const KernelTable& kt);

WTable compute_w_from_potentials(const PotentialPair& pp, const KernelTable& kt,
                                 const ProblemConfig& cfg);

/// Delta_j(rho) from the w-representation. Entire in rho, including rho = 0.
cplx evaluate_delta(int j, cplx rho, const WTable& wt, const ProblemConfig& cfg);
/// Delta_j(rho) and d Delta_j / d rho.
std::pair<cplx, cplx> evaluate_delta_with_derivative(int j, cplx rho, const WTable& wt);

/// S(x, rho) and S'(x, rho) from the delayed Volterra equation. Because
/// a0 + a1 >= pi and a0 >= pi/3, the delayed arguments only reach the
/// unperturbed solution after at most two substitutions, so the solution is
/// an explicit nested quadrature.
std::pair<cplx, cplx> solve_S_volterra(double x, cplx rho, const PotentialPair& pp,
                                       const ProblemConfig& cfg);

/// S(pi, rho) from the transformation-operator representation.
cplx S_from_kernels(cplx rho, const KernelTable& kt);

/// Zeros of Delta_j for 1 - j <= |n| <= N. The estimate only seeds Newton.
Spectrum compute_spectrum(int j, int N, const WTable& wt, const ParameterEstimate& est,
                          const ProblemConfig& cfg);

/// Number of zeros of Delta_j inside the rectangle, by the argument principle.
int count_zeros(int j, const WTable& wt, double re_lo, double re_hi, double im_lo, double im_hi,
                int points_per_side = 64);

}  // namespace dpencil
