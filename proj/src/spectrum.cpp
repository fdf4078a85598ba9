#include "dpencil/forward.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace dpencil {

namespace {

constexpr int kMaxNewton = 50;
constexpr int kCountCutoff = 2;  // cells with |n| <= cutoff may legitimately hold 0 or 2 zeros

struct Root {
  cplx rho;
  int seeded_at;
};

/// Newton on Delta_j(rho) / prod (rho - z) over the deflation set. Returns
/// nothing when the iterate leaves the search window or the budget runs out.
std::optional<cplx> newton(int j, cplx seed, const WTable& wt, double tol, double center,
                           const std::vector<cplx>& deflate = {}) {
  cplx rho = seed;
  for (int it = 0; it < kMaxNewton; ++it) {
    auto [f, df] = evaluate_delta_with_derivative(j, rho, wt);
    for (const cplx& z : deflate) {
      const cplx d = rho - z;
      if (std::abs(d) < 1e-14) return std::nullopt;
      f /= d;
      df = (df - f) / d;
    }
    if (df == cplx{}) return std::nullopt;
    const cplx step = f / df;
    rho -= step;
    if (std::abs(rho.real() - center) > 2.0 || std::abs(rho.imag()) > 6.0) return std::nullopt;
    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(rho))) return rho;
  }
  const cplx f = evaluate_delta(j, rho, wt, {});
  if (std::abs(f) < tol * std::max(1.0, std::norm(rho))) return rho;
  return std::nullopt;
}

int nearest_index(int j, cplx rho) {
  if (j == 1) return static_cast<int>(std::lround(rho.real() + 0.5));
  const int n = static_cast<int>(std::lround(rho.real()));
  if (n != 0) return n;
  return rho.real() >= 0.0 ? 1 : -1;
}

}  // namespace

int count_zeros(int j, const WTable& wt, double re_lo, double re_hi, double im_lo, double im_hi,
                int points_per_side) {
  const std::array<cplx, 5> corners{cplx{re_lo, im_lo}, cplx{re_hi, im_lo}, cplx{re_hi, im_hi},
                                    cplx{re_lo, im_hi}, cplx{re_lo, im_lo}};
  const auto f = [&](cplx z) { return evaluate_delta(j, z, wt, {}); };
  double total = 0.0;
  bool degenerate = false;
  // phase change along [za, zb], bisecting while it exceeds pi/2
  std::function<double(cplx, cplx, cplx, cplx, int)> arc = [&](cplx za, cplx zb, cplx fa, cplx fb,
                                                               int depth) -> double {
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= 0.5 * kPi || depth > 24) return d;
    const cplx zm = 0.5 * (za + zb);
    const cplx fm = f(zm);
    if (std::abs(fm) == 0.0) {
      degenerate = true;
      return 0.0;
    }
    return arc(za, zm, fa, fm, depth + 1) + arc(zm, zb, fm, fb, depth + 1);
  };
  for (int side = 0; side < 4; ++side) {
    cplx za = corners[side];
    cplx fa = f(za);
    for (int k = 1; k <= points_per_side; ++k) {
      const cplx zb = corners[side] + (corners[side + 1] - corners[side]) *
                                          (static_cast<double>(k) / points_per_side);
      const cplx fb = f(zb);
      if (std::abs(fa) == 0.0 || std::abs(fb) == 0.0) return -1;
      total += arc(za, zb, fa, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  if (degenerate) return -1;
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

Spectrum compute_spectrum(int j, int N, const WTable& wt, const ParameterEstimate& est,
                          const ProblemConfig& cfg) {
  if (j != 0 && j != 1) throw ValidationError("boundary index j must be 0 or 1");
  if (N < 1) throw ValidationError("number of zeros N must be positive");
  const auto idx = Spectrum::indices(j, N);
  const cplx alpha = j == 0 ? est.alpha0 : est.alpha1;
  std::vector<std::optional<cplx>> found(idx.size());
  std::vector<int> counts(idx.size(), 1);

  parallel_for(idx.size(), [&](std::size_t i) {
    const int n = idx[i];
    const double a = anchor(n, j);
    cplx seed = a;
    if (n != 0) seed += (est.omega * std::cos(a * cfg.a0) + alpha * std::sin(a * cfg.a1)) / (kPi * n);
    const std::array<cplx, 6> seeds{seed, cplx{a}, cplx{a + 0.25}, cplx{a - 0.25}, cplx{a, 0.5},
                                    cplx{a, -0.5}};
    for (const cplx& s : seeds) {
      if (auto r = newton(j, s, wt, cfg.tolerance, a)) {
        found[i] = r;
        break;
      }
    }
    if (std::abs(n) > kCountCutoff) counts[i] = count_zeros(j, wt, a - 0.5, a + 0.5, -1.0, 1.0);
  });

  Spectrum out;
  out.j = j;
  const int lo = idx.front(), hi = idx.back();
  const auto in_range = [&](int m) { return m >= lo && m <= hi && (j == 1 || m != 0); };

  // Distinct roots, nearest first so that ties resolve toward the closer zero.
  std::vector<Root> roots;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (!found[i]) continue;
    const cplx z = *found[i];
    const bool dup = std::any_of(roots.begin(), roots.end(), [&](const Root& r) {
      return std::abs(r.rho - z) < 1e-9 * std::max(1.0, std::abs(z));
    });
    if (!dup) roots.push_back({z, idx[i]});
  }
  const auto offset = [&](const Root& r) {
    return std::abs(r.rho.real() - anchor(nearest_index(j, r.rho), j));
  };
  std::stable_sort(roots.begin(), roots.end(), [&](const Root& a, const Root& b) {
    const double da = offset(a), db = offset(b);
    if (da != db) return da < db;
    return std::abs(a.rho.imag()) < std::abs(b.rho.imag());
  });
  for (const Root& r : roots) {
    const int m = nearest_index(j, r.rho);
    if (!in_range(m)) continue;
    if (!out.entries.contains(m)) {
      out.entries[m] = r.rho;
      continue;
    }
    // Cell already taken: move to the closest free index.
    for (int step = 1; step <= 2; ++step) {
      const int cand[2] = {m + step, m - step};
      bool placed = false;
      for (int c : cand) {
        if (in_range(c) && !out.entries.contains(c)) {
          out.entries[c] = r.rho;
          std::ostringstream os;
          os << "zero " << r.rho << " nearest to index " << m << " stored at index " << c;
          out.diagnostics.push_back(os.str());
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
  }

  // Indices still empty: deflate known zeros nearby and search again. A
  // double zero is found twice this way and recorded with multiplicity.
  for (int m : idx) {
    if (out.entries.contains(m)) continue;
    const double a = anchor(m, j);
    std::vector<cplx> near;
    for (const auto& [k, z] : out.entries)
      if (std::abs(z.real() - a) < 3.0) near.push_back(z);
    std::optional<cplx> r;
    for (const cplx s : {cplx{a}, cplx{a + 0.3}, cplx{a - 0.3}, cplx{a, 0.5}, cplx{a, -0.5}}) {
      r = newton(j, s, wt, cfg.tolerance, a, near);
      if (r) break;
    }
    if (!r) {
      std::ostringstream os;
      os << "no zero of Delta_" << j << " found for index " << m;
      throw ConvergenceError(os.str());
    }
    out.entries[m] = *r;
    std::ostringstream os;
    os << "index " << m << " filled by deflated search: " << *r;
    out.diagnostics.push_back(os.str());
  }

  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (counts[i] != 1) {
      std::ostringstream os;
      os << "argument principle: cell of index " << idx[i] << " holds " << counts[i] << " zeros";
      out.diagnostics.push_back(os.str());
    }
  }
  return out;
}

}  // namespace dpencil
