#include "dpencil/core.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace dpencil {

ProblemConfig validate_config(ProblemConfig cfg) {
  constexpr double eps = 1e-12;
  std::ostringstream why;
  if (!(cfg.a0 >= kPi / 3.0 - eps && cfg.a0 < kPi))
    why << "a0 = " << cfg.a0 << " violates pi/3 <= a0 < pi";
  else if (!(cfg.a1 >= kPi / 2.0 - eps && cfg.a1 < kPi))
    why << "a1 = " << cfg.a1 << " violates pi/2 <= a1 < pi";
  else if (cfg.a0 + cfg.a1 < kPi - eps)
    why << "a0 + a1 = " << cfg.a0 + cfg.a1 << " < pi";
  else if (cfg.grid_size < 4)
    why << "grid_size = " << cfg.grid_size << " must be at least 4";
  else if (!(cfg.tolerance > 0.0))
    why << "tolerance must be positive";
  const std::string msg = why.str();
  if (!msg.empty()) throw ValidationError(msg);
  cfg.full_inversion = cfg.a0 >= 2.0 * kPi / 5.0 - eps;
  return cfg;
}

std::size_t intervals_for(double length, int grid_size) {
  auto n = static_cast<std::size_t>(std::ceil(length * grid_size - 1e-9));
  if (n < 2) n = 2;
  if (n % 2 == 1) ++n;
  return n;
}

std::size_t panels_for(double a, double b, double per_unit) {
  const double n = std::ceil(std::abs(b - a) * per_unit);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

// ---------------------------------------------------------------------------

SampledFunction::SampledFunction(double lo, double hi, std::vector<cplx> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (values_.size() < 2) throw ValidationError("SampledFunction needs at least two samples");
  if (!(hi > lo)) throw ValidationError("SampledFunction needs lo < hi");
  step_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

SampledFunction SampledFunction::sample(double lo, double hi, std::size_t intervals,
                                        const std::function<cplx(double)>& f) {
  std::vector<cplx> v(intervals + 1);
  const double h = (hi - lo) / static_cast<double>(intervals);
  for (std::size_t k = 0; k <= intervals; ++k)
    v[k] = f(k == intervals ? hi : lo + h * static_cast<double>(k));
  return SampledFunction(lo, hi, std::move(v));
}

SampledFunction SampledFunction::zeros(double lo, double hi, std::size_t intervals) {
  return SampledFunction(lo, hi, std::vector<cplx>(intervals + 1));
}

double SampledFunction::node(std::size_t k) const {
  return k + 1 == values_.size() ? hi_ : lo_ + step_ * static_cast<double>(k);
}

bool SampledFunction::contains(double x) const {
  const double slack = 1e-12 * (1.0 + std::abs(hi_));
  return x >= lo_ - slack && x <= hi_ + slack;
}

std::pair<std::size_t, double> SampledFunction::locate(double x) const {
  const double t = (x - lo_) / step_;
  const auto last = static_cast<long>(values_.size()) - 2;
  long k = static_cast<long>(std::floor(t));
  k = std::clamp(k, 0L, last);
  return {static_cast<std::size_t>(k), x - node(static_cast<std::size_t>(k))};
}

cplx SampledFunction::operator()(double x) const {
  if (!contains(x)) {
    std::ostringstream os;
    os << "evaluation at " << x << " outside [" << lo_ << ", " << hi_ << "]";
    throw ValidationError(os.str());
  }
  const auto [k, s] = locate(x);
  return values_[k] + (values_[k + 1] - values_[k]) * (s / step_);
}

cplx SampledFunction::at_or_zero(double x) const {
  if (!contains(x)) return {};
  const auto [k, s] = locate(x);
  return values_[k] + (values_[k + 1] - values_[k]) * (s / step_);
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

cplx integrate(const SampledFunction& f, double lo, double hi) {
  if (!f.contains(lo) || !f.contains(hi)) {
    std::ostringstream os;
    os << "integration interval [" << lo << ", " << hi << "] outside [" << f.lo() << ", "
       << f.hi() << "]";
    throw ValidationError(os.str());
  }
  if (lo > hi) return -integrate(f, hi, lo);
  Antiderivative prim(f);
  return prim.between(std::clamp(lo, f.lo(), f.hi()), std::clamp(hi, f.lo(), f.hi()));
}

// ---------------------------------------------------------------------------

Antiderivative::Antiderivative(const SampledFunction& f) : f_(f) {
  const std::size_t n = f.size();
  first_.assign(n, cplx{});
  second_.assign(n, cplx{});
  const double h = f.step();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const cplx a = f[k], b = f[k + 1];
    first_[k + 1] = first_[k] + 0.5 * h * (a + b);
    second_[k + 1] = second_[k] + first_[k] * h + a * (h * h / 2.0) + (b - a) * (h * h / 6.0);
  }
}

cplx Antiderivative::first(double x) const {
  if (first_.empty() || x <= f_.lo()) return {};
  if (x >= f_.hi()) return first_.back();
  const auto [k, s] = f_.locate(x);
  const double h = f_.step();
  const cplx a = f_[k], d = f_[k + 1] - f_[k];
  return first_[k] + a * s + d * (s * s / (2.0 * h));
}

cplx Antiderivative::second(double x) const {
  if (second_.empty() || x <= f_.lo()) return {};
  if (x >= f_.hi()) return second_.back() + first_.back() * (x - f_.hi());
  const auto [k, s] = f_.locate(x);
  const double h = f_.step();
  const cplx a = f_[k], d = f_[k + 1] - f_[k];
  return second_[k] + first_[k] * s + a * (s * s / 2.0) + d * (s * s * s / (6.0 * h));
}

// ---------------------------------------------------------------------------

SampledFunction zero_mean_primitive(const SampledFunction& p) {
  Antiderivative prim(p);
  const double len = p.hi() - p.lo();
  const cplx shift = prim.second(p.hi()) / len;
  std::vector<cplx> v(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) v[k] = prim.first(p.node(k)) - shift;
  return SampledFunction(p.lo(), p.hi(), std::move(v));
}

PotentialPair PotentialPair::from_derivative(const ProblemConfig& cfg, SampledFunction q0,
                                             SampledFunction p) {
  constexpr double eps = 1e-9;
  if (std::abs(q0.lo() - cfg.a0) > eps || std::abs(q0.hi() - kPi) > eps)
    throw ValidationError("q0 must be sampled on [a0, pi]");
  if (std::abs(p.lo() - cfg.a1) > eps || std::abs(p.hi() - kPi) > eps)
    throw ValidationError("p must be sampled on [a1, pi]");
  PotentialPair pp;
  pp.q1_ = zero_mean_primitive(p);
  pp.p_prim_ = Antiderivative(p);
  pp.q0_ = std::move(q0);
  pp.p_ = std::move(p);
  return pp;
}

PotentialPair PotentialPair::from_samples(const ProblemConfig& cfg, SampledFunction q0,
                                          const SampledFunction& q1) {
  const cplx mean = integrate(q1, q1.lo(), q1.hi());
  const double scale = (1.0 + q1.max_abs()) * (q1.hi() - q1.lo());
  if (std::abs(mean) > 1e-4 * scale) {
    std::ostringstream os;
    os << "q1 must have zero mean on [a1, pi]; got integral " << std::abs(mean);
    throw ValidationError(os.str());
  }
  const std::size_t n = q1.size();
  const double h = q1.step();
  std::vector<cplx> d(n);
  if (n == 2) {
    d[0] = d[1] = (q1[1] - q1[0]) / h;
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (q1[k + 1] - q1[k - 1]) / (2.0 * h);
    d[0] = (-3.0 * q1[0] + 4.0 * q1[1] - q1[2]) / (2.0 * h);
    d[n - 1] = (3.0 * q1[n - 1] - 4.0 * q1[n - 2] + q1[n - 3]) / (2.0 * h);
  }
  return from_derivative(cfg, std::move(q0), SampledFunction(q1.lo(), q1.hi(), std::move(d)));
}

PotentialPair PotentialPair::from_functions(const ProblemConfig& cfg,
                                            const std::function<cplx(double)>& q0,
                                            const std::function<cplx(double)>& p) {
  const auto n0 = intervals_for(kPi - cfg.a0, cfg.grid_size);
  const auto n1 = intervals_for(kPi - cfg.a1, cfg.grid_size);
  return from_derivative(cfg, SampledFunction::sample(cfg.a0, kPi, n0, q0),
                         SampledFunction::sample(cfg.a1, kPi, n1, p));
}

PotentialPair PotentialPair::zero(const ProblemConfig& cfg) {
  return from_functions(
      cfg, [](double) { return cplx{}; }, [](double) { return cplx{}; });
}

cplx PotentialPair::q1_at(double x) const {
  if (!q1_.contains(x)) return {};
  return q1_.values().front() + p_prim_.first(x);
}

cplx PotentialPair::omega() const { return 0.5 * integrate(q0_, q0_.lo(), q0_.hi()); }

// ---------------------------------------------------------------------------

Spectrum Spectrum::anchors(int j, int max_index) {
  Spectrum s;
  s.j = j;
  for (int n : indices(j, max_index)) s.entries[n] = anchor(n, j);
  return s;
}

std::vector<int> Spectrum::indices(int j, int max_index) {
  std::vector<int> out;
  for (int n = j == 0 ? -max_index : 1 - max_index; n <= max_index; ++n)
    if (j == 1 || n != 0) out.push_back(n);
  return out;
}

int Spectrum::complete_up_to() const {
  int n = 1;
  while (entries.contains(n) && entries.contains(j == 0 ? -n : 1 - n)) ++n;
  return n - 1;
}

cplx Spectrum::at(int n) const {
  auto it = entries.find(n);
  if (it == entries.end()) throw ValidationError("spectrum has no entry for index " + std::to_string(n));
  return it->second;
}

ParameterEstimate ParameterEstimate::from(cplx omega, cplx alpha0, cplx alpha1, double residual) {
  ParameterEstimate e;
  e.omega = omega;
  e.alpha0 = alpha0;
  e.alpha1 = alpha1;
  e.alpha = 0.5 * (alpha0 + alpha1);
  e.beta = 0.5 * (alpha0 - alpha1);
  e.residual_l2 = residual;
  return e;
}

ParameterEstimate ParameterEstimate::from_potentials(const PotentialPair& pp) {
  return from(pp.omega(), pp.alpha0(), pp.alpha1());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

double relative_l2(const SampledFunction& a, const SampledFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double w = (k == 0 || k + 1 == b.size()) ? 0.5 : 1.0;
    const cplx bv = b[k];
    const cplx av = a.at_or_zero(b.node(k));
    num += w * std::norm(av - bv);
    den += w * std::norm(bv);
  }
  if (den == 0.0) return std::sqrt(num * b.step());
  return std::sqrt(num / den);
}

double sup_distance(const SampledFunction& a, const SampledFunction& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k)
    m = std::max(m, std::abs(a.at_or_zero(b.node(k)) - b[k]));
  return m;
}

}  // namespace dpencil
