#include "dpencil/inverse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <sstream>

namespace dpencil {

namespace {

int common_range(const Spectrum& s0, const Spectrum& s1) {
  if (s0.j != 0 || s1.j != 1) throw ValidationError("expected the spectra of j = 0 and j = 1, in that order");
  return std::min(s0.complete_up_to(), s1.complete_up_to());
}

/// c_{1-j}(rho pi) / (rho0_m - rho) for rho near the anchor of index m.
cplx cancelled_base(int j, int m, cplx rho) {
  const cplx delta = rho - anchor(m, j);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return -sign * kPi * sinc(kPi * delta);
}

}  // namespace

ParameterEstimate estimate_parameters(const Spectrum& s0, const Spectrum& s1,
                                      const ProblemConfig& cfg) {
  const int N = common_range(s0, s1);
  if (N < 16) throw ValidationError("parameter estimation needs both spectra complete up to N >= 16");

  struct Row {
    int j, n;
    double r0;
  };
  std::vector<Row> rows;
  for (int j = 0; j < 2; ++j)
    for (int n : Spectrum::indices(j, N))
      if (std::abs(anchor(n, j)) > 0.5 * N) rows.push_back({j, n, anchor(n, j)});

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, 3);
  Eigen::MatrixXd b(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    const Spectrum& s = r.j == 0 ? s0 : s1;
    const cplx gamma = kPi * static_cast<double>(r.n) * (s.at(r.n) - r.r0);
    A(i, 0) = std::cos(r.r0 * cfg.a0);
    A(i, 1 + r.j) = std::sin(r.r0 * cfg.a1);
    b(i, 0) = gamma.real();
    b(i, 1) = gamma.imag();
  }

  static const char* names[3] = {"omega (cos rho0 a0)", "alpha0 (sin rho0 a1, j = 0)",
                                 "alpha1 (sin rho0 a1, j = 1)"};
  for (int c = 0; c < 3; ++c) {
    if (A.col(c).norm() < 1e-10 * std::sqrt(static_cast<double>(m))) {
      throw ValidationError(std::string("rank-deficient design matrix: column ") + names[c] +
                            " vanishes on the sampled indices");
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    const int c = static_cast<int>(qr.colsPermutation().indices()(2));
    throw ValidationError(std::string("rank-deficient design matrix: column ") + names[c] +
                          " is dependent on the others");
  }
  const Eigen::MatrixXd x = qr.solve(b);
  const Eigen::MatrixXd res = A * x - b;
  const double rss = res.squaredNorm();

  const auto c = [&](int k) { return cplx{x(k, 0), x(k, 1)}; };
  ParameterEstimate e = ParameterEstimate::from(c(0), c(1), c(2), std::sqrt(rss) / kPi);
  if (m > 3) {
    const Eigen::MatrixXd cov = (A.transpose() * A).inverse();
    e.uncertainty = std::sqrt(rss / static_cast<double>(m - 3) * cov.diagonal().maxCoeff());
  }
  return e;
}

ParameterEstimate refine_parameters(const Spectrum& s0, const Spectrum& s1,
                                    const ParameterEstimate& est, const ProblemConfig& cfg,
                                    int passes) {
  const int N = common_range(s0, s1);
  const double L0 = kPi - cfg.a0, L1 = kPi - cfg.a1;
  std::vector<int> ns;
  for (int n = -N; n <= N; ++n)
    if (2 * std::abs(n) > N) ns.push_back(n);
  const auto m = static_cast<Eigen::Index>(ns.size());

  // theta0 = -dw cos nL0 + da0 sin nL1 + (c1 sin nL0 + c2 cos nL1 + c3) / n
  // theta1 =  dw sin nL0 + da1 cos nL1 + (d1 cos nL0 + d2 + d3 sin nL1) / n
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 9);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double n = ns[static_cast<std::size_t>(i)];
    A(i, 0) = -std::cos(n * L0);
    A(i, 1) = std::sin(n * L1);
    A(i, 3) = std::sin(n * L0) / n;
    A(i, 4) = std::cos(n * L1) / n;
    A(i, 5) = 1.0 / n;
    A(m + i, 0) = std::sin(n * L0);
    A(m + i, 2) = std::cos(n * L1);
    A(m + i, 6) = std::cos(n * L0) / n;
    A(m + i, 7) = 1.0 / n;
    A(m + i, 8) = std::sin(n * L1) / n;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 9) throw ConvergenceError("parameter refinement: singular design matrix");
  const Eigen::MatrixXd cov = (A.transpose() * A).inverse();

  ParameterEstimate cur = est;
  for (int pass = 0; pass < passes; ++pass) {
    const ThetaSamples t0 = compute_theta_samples(build_delta_from_zeros(s0, N, cur, cfg), cur, N, cfg);
    const ThetaSamples t1 = compute_theta_samples(build_delta_from_zeros(s1, N, cur, cfg), cur, N, cfg);
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
    const auto c = [&](int k) { return cplx{x(k, 0), x(k, 1)}; };
    const double residual = cur.residual_l2;
    cur = ParameterEstimate::from(cur.omega + c(0), cur.alpha0 + c(1), cur.alpha1 + c(2), residual);
    cur.uncertainty = std::sqrt(rss / static_cast<double>(2 * m - 9) *
                                cov.diagonal().head(3).maxCoeff());
  }
  return cur;
}

CharFnFromZeros::CharFnFromZeros(Spectrum zeros, int n_trunc)
    : zeros_(std::move(zeros)), n_trunc_(n_trunc) {
  if (n_trunc < 1) throw ValidationError("truncation index must be positive");
  for (int n : Spectrum::indices(zeros_.j, n_trunc)) {
    if (!zeros_.entries.contains(n)) {
      std::ostringstream os;
      os << "spectrum j = " << zeros_.j << " has no zero for index " << n;
      throw ValidationError(os.str());
    }
    idx_.push_back(n);
    rho_.push_back(zeros_.entries.at(n));
  }
}

CharFnFromZeros::CharFnFromZeros(Spectrum zeros, int n_trunc, const ParameterEstimate& tail,
                                 const ProblemConfig& cfg)
    : CharFnFromZeros(std::move(zeros), n_trunc) {
  const int j = zeros_.j;
  const cplx alpha = j == 0 ? tail.alpha0 : tail.alpha1;
  const auto asymptotic = [&](int n) {
    const double r0 = anchor(n, j);
    return r0 + (tail.omega * std::cos(r0 * cfg.a0) + alpha * std::sin(r0 * cfg.a1)) / (kPi * n);
  };
  std::vector<int> idx;
  std::vector<cplx> rho;
  const int lo = idx_.front(), hi = idx_.back();
  for (int n = lo - (kTailFactor - 1) * n_trunc; n < lo; ++n) {
    idx.push_back(n);
    rho.push_back(asymptotic(n));
  }
  idx.insert(idx.end(), idx_.begin(), idx_.end());
  rho.insert(rho.end(), rho_.begin(), rho_.end());
  for (int n = hi + 1; n <= hi + (kTailFactor - 1) * n_trunc; ++n) {
    idx.push_back(n);
    rho.push_back(asymptotic(n));
  }
  idx_ = std::move(idx);
  rho_ = std::move(rho);
}

cplx CharFnFromZeros::operator()(cplx rho) const {
  const int j = zeros_.j;
  const int m = static_cast<int>(std::lround(rho.real() + 0.5 * j));
  const bool cancel = (j == 1 || m != 0) && m >= idx_.front() && m <= idx_.back();

  cplx value;
  if (cancel) {
    value = cancelled_base(j, m, rho);
    if (j == 0) value /= rho;
  } else {
    value = j == 0 ? kPi * sinc(kPi * rho) : std::cos(kPi * rho);
  }
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (cancel && idx_[i] == m) {
      value *= rho_[i] - rho;
    } else {
      value *= (rho_[i] - rho) / (anchor(idx_[i], j) - rho);
    }
  }
  return value;
}

CharFnFromZeros build_delta_from_zeros(const Spectrum& z, int n_trunc) {
  return CharFnFromZeros(z, n_trunc);
}

CharFnFromZeros build_delta_from_zeros(const Spectrum& z, int n_trunc, const ParameterEstimate& tail,
                                       const ProblemConfig& cfg) {
  return CharFnFromZeros(z, n_trunc, tail, cfg);
}

cplx theta_value(const CharFnFromZeros& d, const ParameterEstimate& est, cplx rho,
                 const ProblemConfig& cfg) {
  const cplx delta = d(rho);
  if (d.j() == 0) {
    return rho * rho * delta - rho * std::sin(rho * kPi) + est.omega * std::cos(rho * (kPi - cfg.a0)) -
           est.alpha0 * std::sin(rho * (kPi - cfg.a1));
  }
  return rho * delta - rho * std::cos(rho * kPi) - est.omega * std::sin(rho * (kPi - cfg.a0)) -
         est.alpha1 * std::cos(rho * (kPi - cfg.a1));
}

ThetaSamples compute_theta_samples(const CharFnFromZeros& d, const ParameterEstimate& est, int N,
                                   const ProblemConfig& cfg) {
  ThetaSamples t;
  t.j = d.j();
  std::vector<cplx> vals(static_cast<std::size_t>(2 * N + 1));
  parallel_for(vals.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i) - N;
    // sin(n pi) is exactly zero; cos(n pi) exactly +-1
    const cplx delta = d(cplx(n));
    const double r = n;
    if (t.j == 0) {
      vals[i] = r * r * delta + est.omega * std::cos(r * (kPi - cfg.a0)) -
                est.alpha0 * std::sin(r * (kPi - cfg.a1));
    } else {
      const double c = (n % 2 == 0) ? 1.0 : -1.0;
      vals[i] = r * delta - r * c - est.omega * std::sin(r * (kPi - cfg.a0)) -
                est.alpha1 * std::cos(r * (kPi - cfg.a1));
    }
  });
  for (int n = -N; n <= N; ++n) t.values[n] = vals[static_cast<std::size_t>(n + N)];
  return t;
}

SampledFunction theta_series(const ThetaSamples& t, bool cosine, double hi, std::size_t intervals) {
  const int N = t.max_index();
  std::vector<cplx> coef(static_cast<std::size_t>(N + 1));
  for (int n = 0; n <= N; ++n) {
    const cplx plus = t.values.at(n), minus = t.values.at(-n);
    coef[static_cast<std::size_t>(n)] = cosine ? (n == 0 ? plus : plus + minus) : plus - minus;
  }
  std::vector<cplx> v(intervals + 1);
  const double h = hi / static_cast<double>(intervals);
  parallel_for(v.size(), [&](std::size_t k) {
    const double x = h * static_cast<double>(k);
    cplx s{};
    for (int n = 0; n <= N; ++n)
      s += coef[static_cast<std::size_t>(n)] * (cosine ? std::cos(n * x) : std::sin(n * x));
    v[k] = s / kPi;
  });
  return SampledFunction(0.0, hi, std::move(v));
}

WTable fourier_invert_w(const ThetaSamples& t0, const ThetaSamples& t1, const ProblemConfig& cfg) {
  if (t0.j != 0 || t1.j != 1) throw ValidationError("expected theta samples for j = 0 and j = 1");
  WTable wt;
  wt.a0 = cfg.a0;
  wt.a1 = cfg.a1;
  const double L0 = kPi - cfg.a0, L1 = kPi - cfg.a1;
  const std::size_t N0 = intervals_for(L0, cfg.grid_size), N1 = intervals_for(L1, cfg.grid_size);
  wt.w00 = theta_series(t0, true, L0, N0);
  wt.w01 = theta_series(t0, false, L1, N1);
  wt.w10 = theta_series(t1, false, L0, N0);
  wt.w11 = theta_series(t1, true, L1, N1);
  wt.omega = t0.values.at(0);
  wt.alpha1 = -t1.values.at(0);
  const SampledFunction xw01 = SampledFunction::sample(0.0, L1, N1, [&](double x) { return x * wt.w01(x); });
  wt.alpha0 = integrate(xw01, 0.0, L1) / (cfg.a1 - kPi);
  return wt;
}

SupportMass support_mass(const ThetaSamples& t, const ProblemConfig& cfg) {
  const int N = std::max(1, t.max_index());
  const std::size_t intervals = std::max<std::size_t>(intervals_for(kPi, cfg.grid_size),
                                                      static_cast<std::size_t>(32 * N));
  SupportMass m;
  for (int nu = 0; nu < 2; ++nu) {
    const SampledFunction g = theta_series(t, t.j == nu, kPi, intervals);
    std::vector<cplx> sq(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) sq[k] = std::norm(g[k]);
    const SampledFunction mass(0.0, kPi, std::move(sq));
    m.total += integrate(mass, 0.0, kPi).real();
    const double edge = kPi - (nu == 0 ? cfg.a0 : cfg.a1) + 4.0 * kPi / N;
    if (edge < kPi) m.tail[nu] = integrate(mass, edge, kPi).real();
  }
  return m;
}

std::array<std::array<double, 2>, 2> support_tail_fractions(const SupportMass& m0, const SupportMass& m1,
                                                            const ProblemConfig& cfg) {
  const double den = std::max(m0.total + m1.total, kPi * cfg.tolerance * cfg.tolerance);
  return {{{m0.tail[0] / den, m0.tail[1] / den}, {m1.tail[0] / den, m1.tail[1] / den}}};
}

cplx v_term(double x, const WTable& wt) {
  const double a0 = wt.a0, L = kPi - a0;
  const SampledFunction& w00 = wt.w00;
  const SampledFunction& w10 = wt.w10;
  std::vector<cplx> d(w00.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = w00[k] - w10[k];
  const Antiderivative D(SampledFunction(0.0, L, std::move(d)));
  // v = 1/2 ∫_{2x-pi}^{pi-a0} (w00 + w10)(y) ∫_{pi+2a0-2x}^{2x-a0-y} (w00 - w10)
  const double lo = std::max(0.0, 2.0 * x - kPi);
  const double inner_lo = kPi + 2.0 * a0 - 2.0 * x;
  const auto f = [&](double y) {
    return (w00(y) + w10(y)) * (D.first(std::clamp(2.0 * x - a0 - y, 0.0, L)) -
                                D.first(std::clamp(inner_lo, 0.0, L)));
  };
  return 0.5 * gauss_on_grid(f, lo, L, 0.0, w00.step(), 2);
}

SampledFunction recover_q0(const WTable& wt, const ProblemConfig& cfg) {
  if (!cfg.full_inversion) {
    throw ValidationError(
        "a0 < 2pi/5: q0 is not determined by the spectra alone; use recover_q0_conditional");
  }
  const double a0 = cfg.a0, L = kPi - a0;
  const std::size_t n = 2 * wt.w00.intervals();
  std::vector<cplx> q(n + 1);
  const double h = (kPi - a0) / static_cast<double>(n);
  parallel_for(q.size(), [&](std::size_t k) {
    const double x = k == n ? kPi : a0 + h * static_cast<double>(k);
    cplx value;
    if (2 * k <= n) {
      const double y = std::clamp(kPi + a0 - 2.0 * x, 0.0, L);
      value = 2.0 * (wt.w00(y) - wt.w10(y));
    } else {
      const double y = std::clamp(2.0 * x - kPi - a0, 0.0, L);
      value = 2.0 * (wt.w00(y) + wt.w10(y));
    }
    if (x > 1.5 * a0 && x < kPi - 0.5 * a0) value -= 2.0 * v_term(x, wt);
    q[k] = value;
  });
  // v switches on at 3a0/2 and off at pi - a0/2. Where that happens inside a
  // cell, both nodes are shifted so the interpolant keeps the cell integral.
  for (const double s : {1.5 * a0, kPi - 0.5 * a0}) {
    const double t = (s - a0) / h;
    const auto k = static_cast<std::size_t>(std::floor(t));
    const double off = (t - static_cast<double>(k)) * h;
    if (k + 1 > n || off < 1e-12 * h || off > h * (1.0 - 1e-12)) continue;
    const bool rising = s < 0.5 * (a0 + kPi);
    const double inside = rising ? h - off : off;
    const cplx node_v = v_term(a0 + h * static_cast<double>(rising ? k + 1 : k), wt);
    const cplx edge_v = v_term(rising ? s + 1e-12 : s - 1e-12, wt);
    const cplx deficit = 0.5 * inside * (node_v + edge_v) - 0.5 * h * node_v;
    const cplx delta = -2.0 * deficit / (2.0 * h);
    q[k] += delta;
    q[k + 1] += delta;
  }
  return SampledFunction(a0, kPi, std::move(q));
}

SampledFunction recover_p(const WTable& wt, const ProblemConfig& cfg) {
  const double a1 = cfg.a1, L = kPi - a1;
  const std::size_t n = 2 * wt.w11.intervals();
  std::vector<cplx> p(n + 1);
  const double h = L / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = k == n ? kPi : a1 + h * static_cast<double>(k);
    if (2 * k < n) {
      const double y = std::clamp(kPi + a1 - 2.0 * x, 0.0, L);
      p[k] = 2.0 * (wt.w11(y) + wt.w01(y));
    } else if (2 * k > n) {
      const double y = std::clamp(2.0 * x - kPi - a1, 0.0, L);
      p[k] = 2.0 * (wt.w11(y) - wt.w01(y));
    } else {
      p[k] = 2.0 * wt.w11(0.0);  // both branches meet here; their mean
    }
  }
  return SampledFunction(a1, kPi, std::move(p));
}

Q1Assembly assemble_q1(const SampledFunction& p, const ParameterEstimate& est, double tolerance) {
  const Antiderivative P(p);
  const cplx base = est.alpha0 + est.alpha1;
  std::vector<cplx> v(p.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = base + P.first(p.node(k));
  Q1Assembly out;
  out.q1 = SampledFunction(p.lo(), p.hi(), std::move(v));
  out.discrepancy = sup_distance(out.q1, zero_mean_primitive(p));
  out.consistent = out.discrepancy <= 10.0 * tolerance;
  return out;
}

}  // namespace dpencil

namespace dpencil {

namespace {

/// Cardinal series of theta_j on the anchor lattice rho0_{n,j}, |n| <= N.
cplx cardinal(const std::vector<std::pair<double, cplx>>& lattice, cplx rho) {
  cplx s{};
  for (const auto& [r0, v] : lattice) s += v * sinc(kPi * (rho - r0));
  return s;
}

/// gamma_j of theta_j - theta~_j = gamma_j c_{1-j}(rho pi), where theta~_j is
/// the cardinal series through the anchor-lattice samples. c_{1-j} vanishes
/// on the lattice and is +-1 halfway between, where the fit is made.
cplx gamma_estimate(const CharFnFromZeros& d, const ParameterEstimate& est, int N,
                    const ProblemConfig& cfg) {
  const int j = d.j();
  std::vector<std::pair<double, cplx>> lattice;
  for (int n = -N; n <= N; ++n) {
    const double r0 = j == 0 ? n : n - 0.5;
    lattice.emplace_back(r0, theta_value(d, est, cplx(r0), cfg));
  }
  cplx num{};
  double den = 0.0;
  const int M = std::max(1, N / 4);
  for (int m = -M; m <= M; ++m) {
    const double rho = j == 0 ? m + 0.5 : m;
    const double c = (j == 0 ? std::sin(rho * kPi) : std::cos(rho * kPi)) > 0 ? 1.0 : -1.0;
    num += c * (theta_value(d, est, cplx(rho), cfg) - cardinal(lattice, cplx(rho)));
    den += 1.0;
  }
  return num / den;
}

bool parity_holds(const CharFnFromZeros& d, const ParameterEstimate& est, int nu,
                  const ProblemConfig& cfg) {
  const double s = ((d.j() + nu) % 2 == 0) ? 1.0 : -1.0;
  for (const cplx rho : {cplx{0.37}, cplx{1.91, 0.2}, cplx{3.3, -0.4}, cplx{7.6, 0.1}}) {
    const cplx tp = theta_value(d, est, rho, cfg), tm = theta_value(d, est, -rho, cfg);
    const cplx g_plus = tp + s * tm, g_minus = tm + s * tp;
    if (std::abs(g_minus - s * g_plus) > 1e-8 * (1.0 + std::abs(tp) + std::abs(tm))) return false;
  }
  return true;
}

}  // namespace

bool SolvabilityReport::accepted() const {
  bool ok = asymptotics_ok;
  for (int j = 0; j < 2; ++j) {
    ok = ok && gamma_ok[j];
    for (int nu = 0; nu < 2; ++nu) ok = ok && type_ok[j][nu] && symmetry_ok[j][nu];
  }
  return ok;
}

std::string SolvabilityReport::summary() const {
  std::ostringstream os;
  os << "accepted=" << (accepted() ? "true" : "false") << "\n";
  os << "N=" << N << "\n";
  os << "asymptotics_ok=" << (asymptotics_ok ? "true" : "false") << "\n";
  os << "residual_l2=" << residual_l2 << "\n";
  os << "growth_ratio=" << growth_ratio << "\n";
  for (int j = 0; j < 2; ++j) {
    for (int nu = 0; nu < 2; ++nu) {
      os << "type_ok_" << j << nu << "=" << (type_ok[j][nu] ? "true" : "false") << "\n";
      os << "tail_fraction_" << j << nu << "=" << tail_fraction[j][nu] << "\n";
      os << "symmetry_ok_" << j << nu << "=" << (symmetry_ok[j][nu] ? "true" : "false") << "\n";
    }
    os << "gamma_residual_" << j << "=" << gamma_residual[j].real() << "," << gamma_residual[j].imag() << "\n";
    os << "gamma_ok_" << j << "=" << (gamma_ok[j] ? "true" : "false") << "\n";
  }
  return os.str();
}

SolvabilityReport check_solvability(const Spectrum& s0, const Spectrum& s1,
                                    const ProblemConfig& cfg) {
  SolvabilityReport r;
  const int N = common_range(s0, s1);
  r.N = N;
  const ParameterEstimate fit = estimate_parameters(s0, s1, cfg);
  r.residual_l2 = fit.residual_l2;

  // n |rho_n - rho0_n| on the top half against the quarter below it
  double top = 0.0, below = 0.0;
  for (const Spectrum* s : {&s0, &s1}) {
    for (int n : Spectrum::indices(s->j, N)) {
      const double r0 = anchor(n, s->j), a = std::abs(r0);
      const double e = a * std::abs(s->at(n) - r0);
      if (2.0 * a > N) top = std::max(top, e);
      else if (4.0 * a > N) below = std::max(below, e);
    }
  }
  r.growth_ratio = top / (below + 0.05);
  r.asymptotics_ok = r.residual_l2 < kResidualThreshold && r.growth_ratio < 1.6;

  const ParameterEstimate est = refine_parameters(s0, s1, fit, cfg);
  const std::array<CharFnFromZeros, 2> d{build_delta_from_zeros(s0, N, est, cfg),
                                         build_delta_from_zeros(s1, N, est, cfg)};
  r.tail_fraction = support_tail_fractions(support_mass(compute_theta_samples(d[0], est, N, cfg), cfg),
                                           support_mass(compute_theta_samples(d[1], est, N, cfg), cfg), cfg);
  for (int j = 0; j < 2; ++j) {
    for (int nu = 0; nu < 2; ++nu) {
      r.type_ok[j][nu] = r.tail_fraction[j][nu] < kTailThreshold;
      r.symmetry_ok[j][nu] = parity_holds(d[j], est, nu, cfg);
    }
    r.gamma_residual[j] = gamma_estimate(d[j], est, N, cfg);
    r.gamma_ok[j] = std::abs(r.gamma_residual[j]) < kGammaThreshold;
  }
  return r;
}

Inversion invert(const Spectrum& s0, const Spectrum& s1, const ProblemConfig& cfg) {
  Inversion inv;
  inv.N = common_range(s0, s1);
  inv.fit = estimate_parameters(s0, s1, cfg);
  inv.est = refine_parameters(s0, s1, inv.fit, cfg);
  const ThetaSamples t0 =
      compute_theta_samples(build_delta_from_zeros(s0, inv.N, inv.est, cfg), inv.est, inv.N, cfg);
  const ThetaSamples t1 =
      compute_theta_samples(build_delta_from_zeros(s1, inv.N, inv.est, cfg), inv.est, inv.N, cfg);
  inv.wt = fourier_invert_w(t0, t1, cfg);
  inv.p = recover_p(inv.wt, cfg);
  inv.q1 = assemble_q1(inv.p, inv.est, std::max(cfg.tolerance, inv.est.uncertainty));
  if (cfg.full_inversion) inv.q0 = recover_q0(inv.wt, cfg);
  inv.report = check_solvability(s0, s1, cfg);
  return inv;
}

}  // namespace dpencil
