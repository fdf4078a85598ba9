#include "dpencil/forward.hpp"

#include "delta_kernels.hpp"

#include <algorithm>

namespace dpencil {

namespace {

constexpr std::size_t kSub = 2;

}  // namespace

// ---------------------------------------------------------------------------
// Kernels

KernelTable::KernelTable(const PotentialPair& pp, const ProblemConfig& cfg)
    : pp_(pp), q0_prim_(pp.q0()), p_prim_(pp.p()), a0_(cfg.a0), a1_(cfg.a1) {}

KernelTable build_kernels(const PotentialPair& pp, const ProblemConfig& cfg) {
  return KernelTable(pp, validate_config(cfg));
}

cplx KernelTable::Q1(double x) const {
  if (x <= a1_) return {};
  x = std::min(x, kPi);
  return pp_.q1()[0] * (x - a1_) + p_prim_.second(x);
}

cplx KernelTable::K0_shifted(double tau, double eta) const {
  if (eta < a0_ || eta > tau - a0_) return {};
  const double m = 0.5 * (eta + a0_);
  return 0.5 * (Q0(tau - m) - Q0(m));
}

cplx KernelTable::K0_shifted_integral(double tau, double m) const {
  m = std::min(m, tau - a0_);
  if (m <= a0_) return {};
  const double h = 0.5 * (m + a0_);
  return QQ0(tau - a0_) - QQ0(tau - h) - QQ0(h);
}

cplx KernelTable::A(double x, double t) const {
  if (t <= 2.0 * a0_ || t > x || t < a0_) return {};
  const auto& q0 = pp_.q0();
  const double g0 = q0.lo(), h = q0.step();
  const auto part1 = [&](double tau) { return q0.at_or_zero(tau) * K0_shifted_integral(tau, t - a0_); };
  const auto part2 = [&](double tau) {
    return q0.at_or_zero(tau) * K0_shifted_integral(tau, 2.0 * (tau - x) + t - a0_);
  };
  const auto part3 = [&](double tau) {
    return q0.at_or_zero(tau) * K0_shifted_integral(tau, 2.0 * tau - t - a0_);
  };
  return gauss_on_grid(part1, t, x, g0, h, kSub) -
         gauss_on_grid(part2, x - 0.5 * t + a0_, x, g0, h, kSub) +
         gauss_on_grid(part3, 0.5 * t + a0_, t, g0, h, kSub);
}

cplx KernelTable::K0(double x, double t) const {
  if (t < a0_ || t > x) return {};
  return 0.5 * (Q0(x - 0.5 * (t - a0_)) - Q0(0.5 * (t + a0_))) + 0.5 * A(x, t);
}

cplx KernelTable::K1(double x, double t) const {
  if (t < a1_ || t > x) return {};
  return 0.5 * (pp_.q1_at(x - 0.5 * (t - a1_)) + pp_.q1_at(0.5 * (t + a1_)));
}

SampledFunction KernelTable::Q0_table() const {
  const auto& q0 = pp_.q0();
  std::vector<cplx> v(q0.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = Q0(q0.node(k));
  return SampledFunction(q0.lo(), q0.hi(), std::move(v));
}

SampledFunction KernelTable::Q1_table() const {
  const auto& q1 = pp_.q1();
  std::vector<cplx> v(q1.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = Q1(q1.node(k));
  return SampledFunction(q1.lo(), q1.hi(), std::move(v));
}

namespace {

template <class F>
std::vector<std::vector<cplx>> triangle(const SampledFunction& grid, std::size_t stride, F&& f) {
  stride = std::max<std::size_t>(stride, 1);
  std::vector<std::vector<cplx>> rows;
  for (std::size_t k = 0; k < grid.size(); k += stride) {
    std::vector<cplx> row;
    for (std::size_t l = 0; l <= k; l += stride) row.push_back(f(grid.node(k), grid.node(l)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<std::vector<cplx>> KernelTable::tabulate_K0(std::size_t stride) const {
  return triangle(pp_.q0(), stride, [&](double x, double t) { return K0(x, t); });
}

std::vector<std::vector<cplx>> KernelTable::tabulate_K1(std::size_t stride) const {
  return triangle(pp_.q1(), stride, [&](double x, double t) { return K1(x, t); });
}

std::vector<std::vector<cplx>> KernelTable::tabulate_A(std::size_t stride) const {
  return triangle(pp_.q0(), stride, [&](double x, double t) { return A(x, t); });
}

// ---------------------------------------------------------------------------
// Boundary functions w

const SampledFunction& WTable::w(int j, int nu) const {
  if (j == 0) return nu == 0 ? w00 : w01;
  return nu == 0 ? w10 : w11;
}

WTable WTable::zero(const ProblemConfig& cfg) {
  WTable wt;
  wt.a0 = cfg.a0;
  wt.a1 = cfg.a1;
  const auto n0 = intervals_for(kPi - cfg.a0, cfg.grid_size);
  const auto n1 = intervals_for(kPi - cfg.a1, cfg.grid_size);
  wt.w00 = wt.w10 = SampledFunction::zeros(0.0, kPi - cfg.a0, n0);
  wt.w01 = wt.w11 = SampledFunction::zeros(0.0, kPi - cfg.a1, n1);
  return wt;
}

cplx u_term(int j, double x, const KernelTable& kt) {
  const double a0 = kt.a0();
  if (x >= kPi - 2.0 * a0) return {};
  const auto& q0 = kt.potentials().q0();
  const double g0 = q0.lo(), h = q0.step();
  const double sj = j == 0 ? 1.0 : -1.0;
  const auto f1 = [&](double tau) { return q0.at_or_zero(tau) * kt.K0_shifted(tau, kPi - x - a0); };
  const auto f2 = [&](double tau) {
    return q0.at_or_zero(tau) * kt.K0_shifted(tau, 2.0 * tau - x - kPi - a0);
  };
  const auto f3 = [&](double tau) {
    return q0.at_or_zero(tau) * kt.K0_shifted(tau, 2.0 * tau + x - kPi - a0);
  };
  const cplx i1 = gauss_on_grid(f1, kPi - x, kPi, g0, h, kSub);
  const cplx i2 = gauss_on_grid(f2, 0.5 * (kPi + x) + a0, kPi, g0, h, kSub);
  const cplx i3 = gauss_on_grid(f3, 0.5 * (kPi - x) + a0, kPi - x, g0, h, kSub);
  return 0.5 * (-sj * i1 + i2 + sj * i3);
}

namespace {

// u_j drops to zero at x = pi - 2 a0 (A(pi, t) has a kink at t = 2 a0). When
// the jump falls inside a cell, the two nodes around it are shifted so the
// piecewise-linear interpolant keeps the local integral of u_j.
SampledFunction conserve_jump(SampledFunction w, int j, const KernelTable& kt) {
  const double xj = kPi - 2.0 * kt.a0();
  if (xj <= 0.0 || xj >= w.hi()) return w;
  const auto [k, off] = w.locate(xj);
  const double h = w.step();
  if (off < 1e-12 * h || off > h * (1.0 - 1e-12)) return w;
  const cplx left = u_term(j, w.node(k), kt);
  const cplx edge = u_term(j, xj * (1.0 - 1e-14), kt);
  const cplx deficit = 0.5 * off * (left + edge) - 0.5 * h * left;
  const cplx delta = deficit / (2.0 * h);
  std::vector<cplx> v = w.values();
  v[k] += delta;
  v[k + 1] += delta;
  return SampledFunction(w.lo(), w.hi(), std::move(v));
}

}  // namespace

WTable compute_w_from_potentials(const PotentialPair& pp, const KernelTable& kt,
                                 const ProblemConfig& cfg) {
  WTable wt;
  wt.a0 = cfg.a0;
  wt.a1 = cfg.a1;
  const auto& q0 = pp.q0();
  const auto& p = pp.p();
  const double a0 = cfg.a0, a1 = cfg.a1;
  for (int j = 0; j < 2; ++j) {
    const double sj = j == 0 ? 1.0 : -1.0;
    auto w0 = SampledFunction::sample(0.0, kPi - a0, q0.intervals(), [&](double x) {
      return 0.25 * (q0(0.5 * (kPi + x + a0)) + sj * q0(0.5 * (kPi - x + a0))) + u_term(j, x, kt);
    });
    w0 = conserve_jump(std::move(w0), j, kt);
    auto w1 = SampledFunction::sample(0.0, kPi - a1, p.intervals(), [&](double x) {
      return 0.25 * (p(0.5 * (kPi + a1 - x)) - sj * p(0.5 * (kPi + a1 + x)));
    });
    (j == 0 ? wt.w00 : wt.w10) = std::move(w0);
    (j == 0 ? wt.w01 : wt.w11) = std::move(w1);
  }
  wt.omega = pp.omega();
  wt.alpha0 = pp.alpha0();
  wt.alpha1 = pp.alpha1();
  return wt;
}

// ---------------------------------------------------------------------------
// Characteristic functions

namespace {

/// ∫ w(x) k(rho, x) dx and its rho-derivative, cell by cell. exp(±i rho x)
/// is advanced by multiplication and refreshed every few cells.
template <class Kernel>
KernelValue integrate_w(const SampledFunction& w, cplx rho, Kernel&& kernel) {
  constexpr std::size_t q = GaussRule::nodes.size();
  KernelValue acc;
  const double h = w.step();
  std::array<cplx, q> ep, em;
  for (std::size_t i = 0; i < q; ++i) {
    ep[i] = std::exp(kI * rho * (h * GaussRule::nodes[i]));
    em[i] = 1.0 / ep[i];
  }
  const cplx step_p = std::exp(kI * rho * h), step_m = 1.0 / step_p;
  cplx bp{1.0}, bm{1.0};
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    const double left = w.node(k);
    if (k % 32 == 0) {
      bp = std::exp(kI * rho * left);
      bm = 1.0 / bp;
    }
    const cplx a = w[k], d = w[k + 1] - w[k];
    for (std::size_t i = 0; i < q; ++i) {
      const double s = GaussRule::nodes[i];
      const cplx e1 = bp * ep[i], e2 = bm * em[i];
      const cplx c = 0.5 * (e1 + e2), sn = -0.5 * kI * (e1 - e2);
      const cplx wv = (a + d * s) * (GaussRule::weights[i] * h);
      const KernelValue kv = kernel(rho, left + h * s, c, sn);
      acc.value += wv * kv.value;
      acc.deriv += wv * kv.deriv;
    }
    bp *= step_p;
    bm *= step_m;
  }
  return acc;
}

#define DPENCIL_KERNEL(name) \
  [](cplx r, double y, cplx c, cplx s) { return kern::name(r, y, c, s); }

cplx moment(const SampledFunction& w, int power) {
  // exact for piecewise-linear w and power <= 1
  return gauss_integrate([&](double x) { return w(x) * (power == 0 ? 1.0 : x); }, w.lo(), w.hi(),
                         w.intervals());
}

}  // namespace

std::pair<cplx, cplx> evaluate_delta_with_derivative(int j, cplx rho, const WTable& wt) {
  const double L0 = kPi - wt.a0, L1 = kPi - wt.a1;
  const bool near_zero = std::abs(rho) < 1e-4;
  if (j == 0) {
    const KernelValue lead = kern::sin1(rho, kPi);
    const KernelValue c0 = kern::cos2(rho, L0);
    const KernelValue s1 = kern::sin2(rho, L1);
    const KernelValue i0 = integrate_w(wt.w00, rho, DPENCIL_KERNEL(cos2));
    const KernelValue i1 = integrate_w(wt.w01, rho, DPENCIL_KERNEL(sin2));
    cplx val = lead.value - wt.omega * c0.value + wt.alpha0 * s1.value + i0.value + i1.value;
    cplx der = lead.deriv - wt.omega * c0.deriv + wt.alpha0 * s1.deriv + i0.deriv + i1.deriv;
    if (!near_zero) {
      const cplx r0 = moment(wt.w00, 0) - wt.omega;
      const cplx r1 = wt.alpha0 * L1 + moment(wt.w01, 1);
      val += r0 / (rho * rho) + r1 / rho;
      der += -2.0 * r0 / (rho * rho * rho) - r1 / (rho * rho);
    }
    return {val, der};
  }
  const cplx cp = std::cos(rho * kPi);
  const KernelValue s0 = kern::sin1(rho, L0);
  const KernelValue c1 = kern::cos1(rho, L1);
  const KernelValue i0 = integrate_w(wt.w10, rho, DPENCIL_KERNEL(sin1));
  const KernelValue i1 = integrate_w(wt.w11, rho, DPENCIL_KERNEL(cos1));
  cplx val = cp + wt.omega * s0.value + wt.alpha1 * c1.value + i0.value + i1.value;
  cplx der = -kPi * std::sin(rho * kPi) + wt.omega * s0.deriv + wt.alpha1 * c1.deriv + i0.deriv +
             i1.deriv;
  if (!near_zero) {
    const cplx r = wt.alpha1 + moment(wt.w11, 0);
    val += r / rho;
    der -= r / (rho * rho);
  }
  return {val, der};
}

cplx evaluate_delta(int j, cplx rho, const WTable& wt, const ProblemConfig&) {
  return evaluate_delta_with_derivative(j, rho, wt).first;
}

// ---------------------------------------------------------------------------
// Volterra oracle

std::pair<cplx, cplx> solve_S_volterra(double x, cplx rho, const PotentialPair& pp,
                                       const ProblemConfig& cfg) {
  if (x < 0.0 || x > kPi + 1e-12) throw ValidationError("solve_S_volterra needs 0 <= x <= pi");
  const double a0 = cfg.a0, a1 = cfg.a1;
  const auto& q0 = pp.q0();
  const auto& p = pp.p();
  const auto s0 = [&](double s) { return kern::sin1(rho, s).value; };
  // S on [0, pi - a0]: one q0 substitution, the delayed argument is unperturbed.
  const auto s1 = [&](double s) {
    cplx v = s0(s);
    if (s > a0) {
      v += gauss_on_grid(
          [&](double t) { return kern::sin1(rho, s - t).value * q0.at_or_zero(t) * s0(t - a0); }, a0,
          s, q0.lo(), q0.step(), kSub);
    }
    return v;
  };
  // KernelValue carries (S, S') here.
  KernelValue out{s0(x), std::cos(rho * x)};
  if (x > a0) {
    out += gauss_on_grid(
        [&](double t) {
          const cplx qs = q0.at_or_zero(t) * s1(t - a0);
          return KernelValue{kern::sin1(rho, x - t).value * qs, std::cos(rho * (x - t)) * qs};
        },
        a0, x, q0.lo(), q0.step(), kSub);
  }
  if (x > a1) {
    out += gauss_on_grid(
        [&](double t) {
          const cplx qs = pp.q1_at(t) * s0(t - a1);
          return KernelValue{2.0 * std::sin(rho * (x - t)) * qs,
                             2.0 * rho * std::cos(rho * (x - t)) * qs};
        },
        a1, x, p.lo(), p.step(), kSub);
  }
  return {out.value, out.deriv};
}

cplx S_from_kernels(cplx rho, const KernelTable& kt) {
  if (std::abs(rho) < 1e-12) throw ValidationError("S_from_kernels needs rho != 0");
  const double a0 = kt.a0(), a1 = kt.a1();
  const auto& q0 = kt.potentials().q0();
  const auto& p = kt.potentials().p();
  cplx S = kern::sin1(rho, kPi).value - kt.Q1(kPi) * std::cos(rho * (kPi - a1)) / rho;
  S += gauss_on_grid([&](double t) { return kt.K0(kPi, t) * kern::sin1(rho, kPi - t).value; }, a0,
                     kPi, q0.lo(), q0.step(), kSub);
  S += gauss_on_grid([&](double t) { return kt.K1(kPi, t) * std::cos(rho * (kPi - t)) / rho; }, a1,
                     kPi, p.lo(), p.step(), kSub);
  return S;
}

}  // namespace dpencil
