#include "dpencil/inverse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <sstream>

namespace dpencil {

namespace {

/// Pieces of q0 that the w-functions and the given data determine directly,
/// with their exact primitives.
class KnownData {
 public:
  KnownData(const WTable& wt, const SampledFunction& q0_known)
      : a0_(wt.a0), L_(kPi - wt.a0), e_(0.5 * kPi + 0.25 * wt.a0), wt_(wt), known_(q0_known),
        known_prim_(q0_known) {
    std::vector<cplx> d(wt.w00.size()), s(wt.w00.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      d[k] = wt.w00[k] - wt.w10[k];
      s[k] = wt.w00[k] + wt.w10[k];
    }
    diff_ = SampledFunction(0.0, L_, std::move(d));
    sum_ = SampledFunction(0.0, L_, std::move(s));
    diff_prim_ = Antiderivative(diff_);
    sum_prim_ = Antiderivative(sum_);
  }

  double a0() const { return a0_; }
  double e() const { return e_; }
  double step() const { return diff_.step() / 2.0; }

  double y(double v) const { return std::clamp(v, 0.0, L_); }

  /// q0 on [a0, 3a0/2]
  cplx qa(double x) const { return 2.0 * diff_(y(kPi + a0_ - 2.0 * x)); }
  /// q0 on [pi - a0/2, pi]
  cplx qc(double x) const { return 2.0 * sum_(y(2.0 * x - kPi - a0_)); }
  /// Left-hand side of the q0 subsystem on (3a0/2, pi - a0/2).
  cplx F(double x) const { return x <= 0.5 * (a0_ + kPi) ? qa(x) : qc(x); }
  cplx given(double x) const { return known_(std::clamp(x, known_.lo(), known_.hi())); }

  /// ∫_{a0}^{s} q0 for s <= 3a0/2 (clipped there)
  cplx Pa(double s) const {
    s = std::min(s, 1.5 * a0_);
    if (s <= a0_) return {};
    return diff_prim_.between(y(kPi + a0_ - 2.0 * s), L_);
  }
  /// ∫_{3a0/2}^{s} of the given q0, s <= e
  cplx Pk(double s) const { return known_prim_.between(1.5 * a0_, std::min(s, e_)); }
  /// R2(s) = ∫_s^pi q0 for s >= pi - a0/2
  cplx R2(double s) const { return sum_prim_.between(y(2.0 * s - kPi - a0_), L_); }
  /// R1(x, t) = ∫_{t-x+a0/2}^{x-a0/2} q0, both limits inside [a0, 3a0/2]
  cplx R1(double x, double t) const { return Pa(x - 0.5 * a0_) - Pa(t - x + 0.5 * a0_); }

  /// ∫_{t_lo}^{pi} q0(t) [Pa(x - a0/2) - Pa(min(t - x + a0/2, 3a0/2))] dt, t_lo >= pi - a0/2
  cplx known_double(double x, double t_lo) const {
    const auto f = [&](double t) { return qc(t) * (Pa(x - 0.5 * a0_) - Pa(t - x + 0.5 * a0_)); };
    return gauss_on_grid(f, t_lo, kPi, a0_, step(), 2);
  }

 private:
  double a0_, L_, e_;
  const WTable& wt_;
  const SampledFunction& known_;
  Antiderivative known_prim_;
  SampledFunction diff_, sum_;
  Antiderivative diff_prim_, sum_prim_;
};

}  // namespace

SampledFunction recover_q0_conditional(const WTable& wt, const SampledFunction& q0_known,
                                       cplx omega0, const ProblemConfig& cfg) {
  const double a0 = cfg.a0;
  if (a0 < kPi / 3.0 - 1e-12 || a0 >= 0.4 * kPi) {
    std::ostringstream os;
    os << "conditional recovery needs pi/3 <= a0 < 2pi/5, got a0 = " << a0;
    throw ValidationError(os.str());
  }
  const KnownData kd(wt, q0_known);
  const double e = kd.e(), end = kPi - a0, half = 0.5 * a0;
  const double tiny = 1e-12;
  if (q0_known.lo() > 1.5 * a0 + 1e-9 || q0_known.hi() < e - 1e-9) {
    std::ostringstream os;
    os << "q0_known must cover (3a0/2, pi/2 + a0/4) = (" << 1.5 * a0 << ", " << e << ")";
    throw ValidationError(os.str());
  }

  const std::size_t n = 2 * wt.w00.intervals();
  const double h = (kPi - a0) / static_cast<double>(n);
  const auto node = [&](std::size_t k) { return k == n ? kPi : a0 + h * static_cast<double>(k); };

  // F2 on [2a0, pi - a0/2]
  const double f2_lo = 2.0 * a0, f2_hi = kPi - half;
  const std::size_t f2_n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((f2_hi - f2_lo) / h)));
  const SampledFunction F2 = SampledFunction::sample(f2_lo, f2_hi, f2_n, [&](double x) {
    const auto f = [&](double t) { return kd.qc(t) * (kd.Pa(1.5 * a0) - kd.Pa(t - x + half)); };
    return kd.F(x) - gauss_on_grid(f, x + half, kPi, a0, kd.step(), 2);
  });

  // collocation points on [e, pi - a0]: grid nodes, then the right endpoint
  std::vector<double> z;
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = node(k);
    if (x > e + tiny && x < end - 1e-9 * h) z.push_back(x);
  }
  z.push_back(end);
  const std::size_t M = z.size();

  // R3(z_i, z_k) for k >= i by accumulating from the right end
  Eigen::MatrixXcd R3 = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
  parallel_for(M, [&](std::size_t i) {
    const double x = z[i];
    const auto f = [&](double tau) { return kd.R1(x, tau) * kd.R2(tau + half); };
    cplx acc{};
    for (std::size_t k = M - 1; k-- > i;) {
      acc += gauss_integrate(f, z[k] + half, z[k + 1] + half, 1);
      R3(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = acc;
    }
  });

  const cplx omega1 = omega0 + kd.Pk(e);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(M));
  parallel_for(M, [&](std::size_t i) {
    const auto I = static_cast<Eigen::Index>(i);
    const double x = z[i];
    const cplx r3xx = R3(I, I);
    const cplx F1 = kd.F(x) - kd.known_double(x, kPi - half);
    const auto g = [&](double t) { return kd.R1(x, t) * F2(std::clamp(t, f2_lo, f2_hi)); };
    const cplx F3 = F1 - gauss_on_grid(g, x + half, kPi - half, a0 + half, h, 2);
    const cplx F4 = F3 + omega1 * r3xx;
    const auto r = [&](double t) { return kd.R2(x + t - half) * kd.given(t); };
    rhs(I) = F4 + gauss_on_grid(r, 1.5 * a0, kPi - x + half, a0, h, 2);
    // trapezoid on z_i..z_{M-1}; R4(x, x) = 0
    for (std::size_t k = i; k + 1 < M; ++k) {
      const double w = 0.5 * (z[k + 1] - z[k]);
      const auto K = static_cast<Eigen::Index>(k);
      A(I, K) += w * (r3xx - R3(I, K));
      A(I, K + 1) += w * (r3xx - R3(I, K + 1));
    }
  });

  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!std::isfinite(cond) || cond > 1e12) {
    std::ostringstream os;
    os << "singular collocation matrix in conditional recovery (condition estimate " << cond << ")";
    throw ConvergenceError(os.str());
  }
  const Eigen::VectorXcd p1 = A.partialPivLu().solve(rhs);

  // q0 on (3a0/2, pi - a0) for U(s) = ∫_{3a0/2}^s q0
  const auto p1_at = [&](double s) -> cplx {
    if (s <= e) return kd.given(s);
    if (s <= z.front()) {
      const double t = (s - e) / (z.front() - e);
      return (1.0 - t) * kd.given(e) + t * p1(0);
    }
    const auto it = std::upper_bound(z.begin(), z.end(), s);
    if (it == z.end()) return p1(static_cast<Eigen::Index>(M - 1));
    const auto k = static_cast<std::size_t>(it - z.begin());
    const double t = (s - z[k - 1]) / (z[k] - z[k - 1]);
    return (1.0 - t) * p1(static_cast<Eigen::Index>(k - 1)) + t * p1(static_cast<Eigen::Index>(k));
  };
  const auto U = [&](double s) {
    if (s <= 1.5 * a0) return cplx{};
    cplx u = kd.Pk(s);
    if (s > e) u += gauss_on_grid(p1_at, e, s, a0, h, 1);
    return u;
  };

  std::vector<cplx> q(n + 1);
  parallel_for(q.size(), [&](std::size_t k) {
    const double x = node(k);
    if (x <= 1.5 * a0) {
      q[k] = kd.qa(x);
    } else if (x <= e) {
      q[k] = kd.given(x);
    } else if (x < end) {
      q[k] = p1_at(x);
    } else if (x <= 2.0 * a0) {
      // v on [pi - a0, 2a0] involves known pieces only
      q[k] = kd.F(x) - kd.known_double(x, x + half);
    } else if (x < kPi - half) {
      q[k] = F2(std::clamp(x, f2_lo, f2_hi)) - kd.R2(x + half) * U(x - half);
    } else {
      q[k] = kd.qc(x);
    }
  });
  return SampledFunction(a0, kPi, std::move(q));
}

}  // namespace dpencil
