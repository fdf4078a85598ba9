#include "dpencil/sl_delay.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <sstream>

namespace dpencil {

SLSpectrum SLSpectrum::anchors(int j, int max_index) {
  SLSpectrum s;
  s.j = j;
  for (int n = 1; n <= max_index; ++n) s.entries[n] = sl_anchor(n, j);
  return s;
}

int SLSpectrum::complete_up_to() const {
  int n = 0;
  while (entries.contains(n + 1)) ++n;
  return n;
}

cplx SLSpectrum::at(int n) const {
  const auto it = entries.find(n);
  if (it == entries.end()) {
    std::ostringstream os;
    os << "no eigenvalue for index " << n << " (j = " << j << ")";
    throw ValidationError(os.str());
  }
  return it->second;
}

SLSpectrum sl_from_pencil(const Spectrum& s) {
  SLSpectrum out;
  out.j = s.j;
  for (const auto& [n, rho] : s.entries)
    if (n >= 1) out.entries[n] = rho * rho;
  return out;
}

SLCharFn::SLCharFn(const SLSpectrum& s, int n_trunc) : j_(s.j) {
  if (n_trunc < 1) throw ValidationError("truncation index must be positive");
  if (s.j != 0 && s.j != 1) throw ValidationError("j must be 0 or 1");
  for (int n = 1; n <= n_trunc; ++n) lambda_.push_back(s.at(n));
}

SLCharFn::SLCharFn(const SLSpectrum& s, int n_trunc, cplx omega, double a) : SLCharFn(s, n_trunc) {
  for (int n = n_trunc + 1; n <= CharFnFromZeros::kTailFactor * n_trunc; ++n) {
    const double r0 = anchor(n, j_);
    const cplx r = r0 + omega * std::cos(r0 * a) / (kPi * n);
    lambda_.push_back(r * r);
  }
}

cplx SLCharFn::operator()(cplx rho) const {
  // Delta_j is even; work on the right half-plane
  const cplx r = rho.real() < 0.0 ? -rho : rho;
  const cplx lam = r * r;
  const int m = static_cast<int>(std::lround(r.real() + 0.5 * j_));
  const bool cancel = m >= 1 && m <= static_cast<int>(lambda_.size());

  cplx value;
  if (cancel) {
    // c_{1-j}(r pi) / (r0_m - r)
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    value = -sign * kPi * sinc(kPi * (r - anchor(m, j_)));
    if (j_ == 0) value /= r;
  } else {
    value = j_ == 0 ? kPi * sinc(kPi * r) : std::cos(kPi * r);
  }
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double r0 = anchor(n, j_);
    if (cancel && n == m) {
      value *= (lambda_[i] - lam) / (r0 + r);
    } else {
      value *= (lambda_[i] - lam) / (r0 * r0 - lam);
    }
  }
  return value;
}

SLCharFn sl_delta_from_eigs(const SLSpectrum& s, int n_trunc) { return SLCharFn(s, n_trunc); }

ProblemConfig sl_config(double a, const ProblemConfig& base) {
  if (!(a >= 0.4 * kPi - 1e-12 && a < kPi)) {
    std::ostringstream os;
    os << "the one-delay problem needs 2pi/5 <= a < pi, got a = " << a;
    throw ValidationError(os.str());
  }
  ProblemConfig cfg = base;
  cfg.a0 = a;
  cfg.a1 = std::max(0.5 * kPi, kPi - a);
  return validate_config(cfg);
}

namespace {

int common_range(const SLSpectrum& s0, const SLSpectrum& s1) {
  if (s0.j != 0 || s1.j != 1) throw ValidationError("expected the spectra of j = 0 and j = 1, in that order");
  const int N = std::min(s0.complete_up_to(), s1.complete_up_to());
  if (N < 16) throw ValidationError("both spectra must be complete up to N >= 16");
  return N;
}

ThetaSamples sl_theta_samples(const SLCharFn& d, cplx omega, double a, int N) {
  ThetaSamples t;
  t.j = d.j();
  const double L = kPi - a;
  std::vector<cplx> vals(static_cast<std::size_t>(N + 1));
  parallel_for(vals.size(), [&](std::size_t i) {
    const double n = static_cast<double>(i);
    const cplx delta = d(cplx(n));
    if (t.j == 0) {
      vals[i] = n * n * delta + omega * std::cos(n * L);
    } else {
      const double c = (i % 2 == 0) ? 1.0 : -1.0;
      vals[i] = n * delta - n * c - omega * std::sin(n * L);
    }
  });
  const double parity = t.j == 0 ? 1.0 : -1.0;
  for (int n = 0; n <= N; ++n) {
    t.values[n] = vals[static_cast<std::size_t>(n)];
    if (n > 0) t.values[-n] = parity * vals[static_cast<std::size_t>(n)];
  }
  return t;
}

cplx sl_theta(const SLCharFn& d, cplx omega, double a, cplx rho) {
  const double L = kPi - a;
  if (d.j() == 0) return rho * rho * d(rho) - rho * std::sin(rho * kPi) + omega * std::cos(rho * L);
  return rho * d(rho) - rho * std::cos(rho * kPi) - omega * std::sin(rho * L);
}

struct OmegaFit {
  ParameterEstimate est;
  double growth_ratio = 0.0;
};

OmegaFit fit_omega(const SLSpectrum& s0, const SLSpectrum& s1, double a) {
  const int N = common_range(s0, s1);
  cplx num{};
  double den = 0.0;
  std::vector<std::pair<double, cplx>> rows;  // (cos r0 a, gamma)
  double top = 0.0, below = 0.0;
  for (const SLSpectrum* s : {&s0, &s1}) {
    for (int n = 1; n <= N; ++n) {
      const double r0 = anchor(n, s->j);
      const cplx dr = std::sqrt(s->at(n)) - r0;
      const double e = r0 * std::abs(dr);
      if (2 * n > N) {
        top = std::max(top, e);
        const double c = std::cos(r0 * a);
        const cplx g = kPi * static_cast<double>(n) * dr;
        rows.emplace_back(c, g);
        num += c * g;
        den += c * c;
      } else if (4 * n > N) {
        below = std::max(below, e);
      }
    }
  }
  if (den < 1e-10 * static_cast<double>(rows.size()))
    throw ValidationError("rank-deficient design: cos((n - j/2) a) vanishes on the sampled indices");
  const cplx omega = num / den;
  double rss = 0.0;
  for (const auto& [c, g] : rows) rss += std::norm(g - omega * c);
  OmegaFit f;
  f.est = ParameterEstimate::from(omega, 0.0, 0.0, std::sqrt(rss) / kPi);
  if (rows.size() > 1) f.est.uncertainty = std::sqrt(rss / static_cast<double>(rows.size() - 1) / den);
  f.growth_ratio = top / (below + 0.05);
  return f;
}

/// theta-domain refinement of omega with the boundary terms of w00, w10 as
/// nuisance columns; the same idea as refine_parameters with alpha = 0.
ParameterEstimate refine_omega(const SLSpectrum& s0, const SLSpectrum& s1, ParameterEstimate est,
                               double a, int passes = 2) {
  const int N = common_range(s0, s1);
  const double L = kPi - a;
  std::vector<int> ns;
  for (int n = N / 2 + 1; n <= N; ++n) ns.push_back(n);
  const auto m = static_cast<Eigen::Index>(ns.size());
  // theta0 = -dw cos nL + (c1 sin nL + c2) / n,  theta1 = dw sin nL + (d1 cos nL + d2) / n
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 5);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double n = ns[static_cast<std::size_t>(i)];
    A(i, 0) = -std::cos(n * L);
    A(i, 1) = std::sin(n * L) / n;
    A(i, 2) = 1.0 / n;
    A(m + i, 0) = std::sin(n * L);
    A(m + i, 3) = std::cos(n * L) / n;
    A(m + i, 4) = 1.0 / n;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 5) throw ConvergenceError("omega refinement: singular design matrix");
  const Eigen::MatrixXd cov = (A.transpose() * A).inverse();
  for (int pass = 0; pass < passes; ++pass) {
    const ThetaSamples t0 = sl_theta_samples(SLCharFn(s0, N, est.omega, a), est.omega, a, N);
    const ThetaSamples t1 = sl_theta_samples(SLCharFn(s1, N, est.omega, a), est.omega, a, N);
    Eigen::MatrixXd b(2 * m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int n = ns[static_cast<std::size_t>(i)];
      b(i, 0) = t0.values.at(n).real();
      b(i, 1) = t0.values.at(n).imag();
      b(m + i, 0) = t1.values.at(n).real();
      b(m + i, 1) = t1.values.at(n).imag();
    }
    const Eigen::MatrixXd x = qr.solve(b);
    const double rss = (A * x - b).squaredNorm();
    const double residual = est.residual_l2;
    est = ParameterEstimate::from(est.omega + cplx{x(0, 0), x(0, 1)}, 0.0, 0.0, residual);
    est.uncertainty = std::sqrt(rss / static_cast<double>(2 * m - 5) * cov(0, 0));
  }
  return est;
}

}  // namespace

ParameterEstimate sl_estimate_omega(const SLSpectrum& s0, const SLSpectrum& s1, double a) {
  return refine_omega(s0, s1, fit_omega(s0, s1, a).est, a);
}

SolvabilityReport sl_check_solvability(const SLSpectrum& s0, const SLSpectrum& s1, double a,
                                       const ProblemConfig& cfg) {
  const ProblemConfig pc = sl_config(a, cfg);
  SolvabilityReport r;
  const int N = common_range(s0, s1);
  r.N = N;
  const OmegaFit f = fit_omega(s0, s1, a);
  r.residual_l2 = f.est.residual_l2;
  r.growth_ratio = f.growth_ratio;
  r.asymptotics_ok = r.residual_l2 < kResidualThreshold && r.growth_ratio < 1.6;

  const ParameterEstimate est = refine_omega(s0, s1, f.est, a);
  std::array<SupportMass, 2> mass;
  for (int j = 0; j < 2; ++j) {
    const SLCharFn d(j == 0 ? s0 : s1, N, est.omega, a);
    mass[j] = support_mass(sl_theta_samples(d, est.omega, a, N), pc);
    // theta_j(-rho) = (-1)^j theta_j(rho)
    const double s = j == 0 ? 1.0 : -1.0;
    bool parity = true;
    for (const cplx rho : {cplx{0.37}, cplx{1.91, 0.2}, cplx{3.3, -0.4}, cplx{7.6, 0.1}}) {
      const cplx tp = sl_theta(d, est.omega, a, rho), tm = sl_theta(d, est.omega, a, -rho);
      parity = parity && std::abs(tm - s * tp) <= 1e-8 * (1.0 + std::abs(tp));
    }
    r.symmetry_ok[j][0] = r.symmetry_ok[j][1] = parity;
  }
  // the nu = 1 series belong to the unused q1 channel
  const auto frac = support_tail_fractions(mass[0], mass[1], pc);
  for (int j = 0; j < 2; ++j) {
    r.tail_fraction[j][0] = frac[j][0];
    r.type_ok[j][0] = r.tail_fraction[j][0] < kTailThreshold;
  }
  return r;
}

SampledFunction sl_invert(const SLSpectrum& s0, const SLSpectrum& s1, double a,
                          const ProblemConfig& cfg) {
  const ProblemConfig pc = sl_config(a, cfg);
  const int N = common_range(s0, s1);
  const ParameterEstimate est = sl_estimate_omega(s0, s1, a);
  const ThetaSamples t0 = sl_theta_samples(SLCharFn(s0, N, est.omega, a), est.omega, a, N);
  const ThetaSamples t1 = sl_theta_samples(SLCharFn(s1, N, est.omega, a), est.omega, a, N);
  WTable wt = fourier_invert_w(t0, t1, pc);
  const double L1 = kPi - pc.a1;
  wt.w01 = SampledFunction::zeros(0.0, L1, wt.w01.intervals());
  wt.w11 = SampledFunction::zeros(0.0, L1, wt.w11.intervals());
  wt.alpha0 = wt.alpha1 = 0.0;
  return recover_q0(wt, pc);
}

}  // namespace dpencil
