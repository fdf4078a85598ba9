#include "dpencil/counterexample.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace dpencil {

PiecewiseSampled PiecewiseSampled::sample(const std::vector<double>& breakpoints, int grid_size,
                                          const std::function<cplx(double)>& f) {
  if (breakpoints.size() < 2) throw ValidationError("a piecewise potential needs at least two breakpoints");
  PiecewiseSampled out;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double lo = breakpoints[k], hi = breakpoints[k + 1];
    if (hi < lo - 1e-12) throw ValidationError("breakpoints must be increasing");
    if (hi - lo < 1e-12) continue;
    // values at the end nodes are the one-sided limits from inside the piece
    const double eps = 1e-12 * (hi - lo);
    out.pieces_.push_back(SampledFunction::sample(lo, hi, intervals_for(hi - lo, grid_size),
                                                  [&](double x) { return f(std::clamp(x, lo + eps, hi - eps)); }));
  }
  if (out.pieces_.empty()) throw ValidationError("a piecewise potential needs a non-empty piece");
  return out;
}

std::vector<double> PiecewiseSampled::breakpoints() const {
  std::vector<double> b;
  for (const SampledFunction& p : pieces_) b.push_back(p.lo());
  b.push_back(hi());
  return b;
}

cplx PiecewiseSampled::operator()(double x) const {
  if (pieces_.empty() || x < lo() || x > hi()) return {};
  for (const SampledFunction& p : pieces_)
    if (x < p.hi()) return p(x);
  return pieces_.back()(x);
}

TwoDelayPotentials TwoDelayPotentials::from_functions(double a1, double a2,
                                                      const std::function<cplx(double)>& q1,
                                                      const std::function<cplx(double)>& q2,
                                                      const ProblemConfig& cfg,
                                                      const std::vector<double>& extra_breaks1,
                                                      const std::vector<double>& extra_breaks2) {
  if (!(0.5 * kPi - 1e-12 <= a1 && a1 <= a2 && a2 < kPi)) {
    std::ostringstream os;
    os << "delays must satisfy pi/2 <= a1 <= a2 < pi, got a1 = " << a1 << ", a2 = " << a2;
    throw ValidationError(os.str());
  }
  const auto breaks = [](double a, std::vector<double> extra) {
    extra.push_back(a);
    extra.push_back(kPi);
    std::sort(extra.begin(), extra.end());
    std::erase_if(extra, [&](double b) { return b < a || b > kPi; });
    return extra;
  };
  TwoDelayPotentials tp;
  tp.a1 = a1;
  tp.a2 = a2;
  tp.q1 = PiecewiseSampled::sample(breaks(a1, extra_breaks1), cfg.grid_size, q1);
  tp.q2 = PiecewiseSampled::sample(breaks(a2, extra_breaks2), cfg.grid_size, q2);
  const auto one = [](double) { return 1.0; };
  tp.omega1 = 0.5 * tp.q1.integrate_against(one, kPi);
  tp.omega2 = 0.5 * tp.q2.integrate_against(one, kPi);
  return tp;
}

TwoDelayPotentials TwoDelayPotentials::zero(double a1, double a2, const ProblemConfig& cfg) {
  const auto z = [](double) { return cplx{}; };
  return from_functions(a1, a2, z, z, cfg);
}

BoundaryCoeffs BoundaryCoeffs::dirichlet(int j) {
  BoundaryCoeffs bc;
  bc.h[0][0] = 1.0;
  bc.H[j][1] = 1.0;
  return bc;
}

TwoDelayPotentials build_example_potentials(double a1, double a2, const ProblemConfig& cfg) {
  const double m1 = 0.5 * (a1 + a2), m2 = 0.5 * (a1 + kPi), m3 = kPi - 0.5 * (a2 - a1);
  const double m4 = 0.5 * (a2 + kPi);
  const auto q1 = [=](double x) -> cplx {
    if (x < m1) return 0.0;
    if (x < m2) return 1.0;
    if (x < m3) return -1.0;
    return 0.0;
  };
  const auto q2 = [=](double x) -> cplx { return x < m4 ? -1.0 : 1.0; };
  TwoDelayPotentials tp = TwoDelayPotentials::from_functions(a1, a2, q1, q2, cfg, {m1, m2, m3}, {m4});
  if (std::abs(tp.omega1) > 1e-12 || std::abs(tp.omega2) > 1e-12)
    throw ConvergenceError("example potentials: omega_1, omega_2 do not vanish on the grid");
  return tp;
}

cplx regge_char(const TwoDelayPotentials& tp, cplx rho) {
  if (std::abs(rho) < 0.1) throw ValidationError("regge_char needs |rho| >= 0.1");
  const cplx I{0.0, 1.0};
  cplx s = 1.0;
  for (int nu = 1; nu <= 2; ++nu) {
    const double a = tp.a(nu);
    const cplx omega = nu == 1 ? tp.omega1 : tp.omega2;
    const cplx m = tp.q(nu).integrate_against([&](double x) { return std::exp(-2.0 * I * rho * x); }, kPi);
    s += omega * std::exp(-I * rho * a) / (I * rho) - std::exp(I * rho * a) / (2.0 * I * rho) * m;
  }
  return std::exp(I * rho * kPi) * s;
}

std::pair<cplx, cplx> solve_two_delay_volterra(double x, cplx rho, const TwoDelayPotentials& tp,
                                               std::array<cplx, 2> init) {
  const auto y0 = [&](double t) { return init[0] * std::cos(rho * t) + init[1] * t * sinc(rho * t); };
  const auto d0 = [&](double t) { return -init[0] * rho * std::sin(rho * t) + init[1] * std::cos(rho * t); };
  cplx y = y0(x), dy = d0(x);
  for (int nu = 1; nu <= 2; ++nu) {
    const double a = tp.a(nu);
    if (x <= a) continue;
    y += tp.q(nu).integrate_against([&](double t) { return (x - t) * sinc(rho * (x - t)) * y0(t - a); }, x);
    dy += tp.q(nu).integrate_against([&](double t) { return std::cos(rho * (x - t)) * y0(t - a); }, x);
  }
  return {y, dy};
}

CharValues char_values(const TwoDelayPotentials& tp, cplx lambda) {
  const cplx rho = std::sqrt(lambda);
  const auto [s, ds] = solve_two_delay_volterra(kPi, rho, tp, {0.0, 1.0});
  const auto [c, dc] = solve_two_delay_volterra(kPi, rho, tp, {1.0, 0.0});
  return {s, ds, c, dc};
}

std::array<cplx, 2> leading_delta(const TwoDelayPotentials& tp, cplx lambda) {
  const cplx rho = std::sqrt(lambda);
  cplx d0 = kPi * sinc(rho * kPi), d1 = std::cos(rho * kPi);
  for (int nu = 1; nu <= 2; ++nu) {
    const double L = kPi - tp.a(nu);
    const cplx omega = nu == 1 ? tp.omega1 : tp.omega2;
    d0 -= omega * std::cos(rho * L) / lambda;
    d1 += omega * L * sinc(rho * L);
  }
  return {d0, d1};
}

double theta_identity_residual(const TwoDelayPotentials& tp, cplx lambda) {
  const CharValues v = char_values(tp, lambda);
  const auto [d00, d10] = leading_delta(tp, lambda);
  const cplx t0 = 2.0 * d10 - v.delta1;
  const cplx t1 = lambda * (v.delta0 - 2.0 * d00);
  return std::max(std::abs(v.theta0 - t0) / (1.0 + std::abs(t0)),
                  std::abs(v.theta1 - t1) / (1.0 + std::abs(t1)));
}

cplx general_delta(const TwoDelayPotentials& tp, const BoundaryCoeffs& bc, cplx lambda) {
  const CharValues v = char_values(tp, lambda);
  std::array<std::array<cplx, 2>, 2> m;
  for (int nu = 0; nu < 2; ++nu) {
    m[nu][0] = bc.h[1][nu] + bc.H[0][nu] * v.delta0 + bc.H[1][nu] * v.delta1;
    m[nu][1] = bc.h[0][nu] + bc.H[0][nu] * v.theta0 + bc.H[1][nu] * v.theta1;
  }
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

std::vector<cplx> two_delay_zeros(const TwoDelayPotentials& tp, int j, int count) {
  const auto f = [&](cplx rho) {
    const auto [s, ds] = solve_two_delay_volterra(kPi, rho, tp, {0.0, 1.0});
    return j == 0 ? s : ds;
  };
  std::vector<cplx> zeros(static_cast<std::size_t>(count));
  parallel_for(zeros.size(), [&](std::size_t i) {
    cplx rho = anchor(static_cast<int>(i) + 1, j);
    for (int it = 0; it < 50; ++it) {
      const double h = 1e-6 * (1.0 + std::abs(rho));
      const cplx d = (f(rho + h) - f(rho - h)) / (2.0 * h);
      const cplx step = f(rho) / d;
      rho -= step;
      if (std::abs(step) < 1e-13 * (1.0 + std::abs(rho))) break;
    }
    zeros[i] = rho;
  });
  return zeros;
}

bool CounterexampleReport::passed() const {
  return regge_deviation < kReggeTolerance && zero_deviation[0] < kZeroTolerance &&
         zero_deviation[1] < kZeroTolerance && theta_identity < kIdentityTolerance &&
         delta_swap < kIdentityTolerance;
}

std::string CounterexampleReport::summary() const {
  std::ostringstream os;
  os << "passed=" << (passed() ? "true" : "false") << "\n";
  os << "a1=" << a1 << "\n";
  os << "a2=" << a2 << "\n";
  os << "regge_deviation=" << regge_deviation << "\n";
  os << "zero_deviation_0=" << zero_deviation[0] << "\n";
  os << "zero_deviation_1=" << zero_deviation[1] << "\n";
  os << "theta_identity=" << theta_identity << "\n";
  os << "delta_swap=" << delta_swap << "\n";
  return os.str();
}

CounterexampleReport verify_counterexample(double a1, double a2, const ProblemConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  CounterexampleReport r;
  r.a1 = a1;
  r.a2 = a2;
  const TwoDelayPotentials ex = build_example_potentials(a1, a2, cfg);
  const TwoDelayPotentials zero = TwoDelayPotentials::zero(a1, a2, cfg);

  std::vector<cplx> grid;
  for (int k = 1; k <= 16; ++k)
    for (int m = 0; m <= 1; ++m) grid.emplace_back(0.5 * k, m);
  std::vector<double> dev(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const cplx rho = grid[i];
    dev[i] = std::abs(regge_char(ex, rho) * std::exp(cplx{0.0, -1.0} * rho * kPi) - 1.0);
  });
  r.regge_deviation = *std::max_element(dev.begin(), dev.end());

  for (int j = 0; j < 2; ++j) {
    const std::vector<cplx> z = two_delay_zeros(ex, j, 20);
    for (std::size_t i = 0; i < z.size(); ++i)
      r.zero_deviation[j] = std::max(r.zero_deviation[j], std::abs(z[i] - anchor(static_cast<int>(i) + 1, j)));
  }

  const std::vector<cplx> lambdas{1.0, 6.25, {2.0, 3.0}, {10.5, -1.0}};
  BoundaryCoeffs mixed;
  mixed.h = {{{1.0, 0.5}, {-0.3, 2.0}}};
  mixed.H = {{{0.7, {0.0, 1.0}}, {1.5, -0.4}}};
  for (const cplx lambda : lambdas) {
    r.theta_identity = std::max(r.theta_identity, theta_identity_residual(ex, lambda));
    for (const BoundaryCoeffs& bc : {BoundaryCoeffs::dirichlet(0), BoundaryCoeffs::dirichlet(1), mixed}) {
      const cplx d0 = general_delta(zero, bc, lambda);
      r.delta_swap = std::max(r.delta_swap, std::abs(general_delta(ex, bc, lambda) - d0) / (1.0 + std::abs(d0)));
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace dpencil
