// Acceptance run: one PASS/FAIL line per criterion, then a tally.

#include "dpencil/counterexample.hpp"
#include "dpencil/forward.hpp"
#include "dpencil/inverse.hpp"
#include "dpencil/samples.hpp"
#include "dpencil/sl_delay.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace dpencil;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Line {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(ok ? what : what + " (!)");
  }
  void note(const std::string& what) { details.push_back(what); }
};

ProblemConfig make_config(double a0, double a1) {
  ProblemConfig cfg;
  cfg.a0 = a0;
  cfg.a1 = a1;
  return validate_config(cfg);
}

Spectrum truncate(const Spectrum& s, int N) {
  Spectrum t;
  t.j = s.j;
  for (int n : Spectrum::indices(s.j, N)) t.entries[n] = s.at(n);
  return t;
}

struct Forward {
  WTable wt;
  Spectrum s0, s1;
};

Forward forward(const PotentialPair& pp, const ProblemConfig& cfg, int N) {
  Forward f;
  const KernelTable kt(pp, cfg);
  f.wt = compute_w_from_potentials(pp, kt, cfg);
  const auto est = ParameterEstimate::from_potentials(pp);
  f.s0 = compute_spectrum(0, N, f.wt, est, cfg);
  f.s1 = compute_spectrum(1, N, f.wt, est, cfg);
  return f;
}

// Residuals of the moment identities: [0..2] w against the constants, [3..4] p against w, [5] q0 against w.
std::array<double, 6> moment_residuals(const SampledFunction& q0, const SampledFunction& p, const WTable& wt,
                                       cplx omega, cplx alpha0, cplx alpha1, double a1) {
  const double L0 = kPi - wt.a0, L1 = kPi - a1;
  const auto xw01 = SampledFunction::sample(0.0, L1, wt.w01.intervals(), [&](double x) { return x * wt.w01(x); });
  const auto xp = SampledFunction::sample(a1, kPi, p.intervals(), [&](double x) { return x * p(x); });
  const cplx ip = integrate(p, a1, kPi);
  const cplx iw00 = integrate(wt.w00, 0.0, L0), iw11 = integrate(wt.w11, 0.0, L1), ixw01 = integrate(xw01, 0.0, L1);
  return {std::abs(iw00 - omega),
          std::abs(ixw01 - alpha0 * (a1 - kPi)),
          std::abs(iw11 + alpha1),
          std::abs(ip - 2.0 * iw11),
          std::abs(integrate(xp, a1, kPi) - (0.5 * (kPi + a1) * ip - ixw01)),
          std::abs(integrate(q0, q0.lo(), kPi) - 2.0 * iw00)};
}

double max_of(const std::array<double, 6>& r, std::size_t from = 0, std::size_t to = 6) {
  double m = 0.0;
  for (std::size_t k = from; k < to; ++k) m = std::max(m, r[k]);
  return m;
}

struct PencilCase {
  std::string name;
  ProblemConfig cfg;
  PotentialPair pp;
  Forward fwd;
  std::array<Inversion, 3> inv;  // N = 50, 100, 200
  double seconds = 0.0;
};

constexpr int kLevels[3] = {50, 100, 200};

}  // namespace

int main() {
  std::vector<Line> lines;

  {
    Line c{1, "zero-potential spectra"};
    const auto t0 = Clock::now();
    const ProblemConfig cfg = make_config(2.0, 1.9);
    const WTable wt = WTable::zero(cfg);
    const auto est = ParameterEstimate::from(0.0, 0.0, 0.0);
    double err = 0.0;
    std::size_t count = 0;
    for (int j = 0; j < 2; ++j) {
      const Spectrum s = compute_spectrum(j, 20, wt, est, cfg);
      for (int n : Spectrum::indices(j, 20)) {
        err = std::max(err, std::abs(s.at(n) - anchor(n, j)));
        ++count;
      }
    }
    const double dt = seconds_since(t0);
    c.require(count == 80, "zeros=" + std::to_string(count));
    c.require(err < 1e-9, fmt("max_err=%.2e", err));
    c.require(dt < 10.0, fmt("time=%.1fs", dt));
    lines.push_back(c);
  }

  {
    Line c{2, "Delta against the delayed Volterra solution"};
    const auto t0 = Clock::now();
    const ProblemConfig cfg = make_config(2.0, 1.9);
    const cplx points[8] = {{0.0, 0.0}, {0.3, 0.0}, {2.5, 0.0}, {1.0, 0.5},
                            {-1.7, 0.2}, {3.3, -0.8}, {5.1, 1.5}, {7.25, 0.1}};
    double err = 0.0;
    for (const auto& sc : samples::all(cfg)) {
      const WTable wt = compute_w_from_potentials(sc.pp, KernelTable(sc.pp, cfg), cfg);
      for (cplx rho : points) {
        const auto [s, ds] = solve_S_volterra(kPi, rho, sc.pp, cfg);
        err = std::max(err, std::abs(evaluate_delta(0, rho, wt, cfg) - s));
        err = std::max(err, std::abs(evaluate_delta(1, rho, wt, cfg) - ds));
      }
    }
    const double dt = seconds_since(t0);
    c.require(err < 1e-6, fmt("max_diff=%.2e", err));
    c.require(dt < 30.0, fmt("time=%.1fs", dt));
    lines.push_back(c);
  }

  {
    Line c{3, "kernel identities"};
    double k0xx = 0.0, k0a = 0.0, k1a = 0.0, api = 0.0;
    for (double a0 : {2.0, 1.35}) {
      const ProblemConfig cfg = make_config(a0, 1.9);
      for (const auto& sc : samples::all(cfg)) {
        const KernelTable kt(sc.pp, cfg);
        const cplx alpha = ParameterEstimate::from_potentials(sc.pp).alpha;
        const auto& q0 = sc.pp.q0();
        for (std::size_t k = 0; k < q0.size(); ++k) {
          const double x = q0.node(k);
          k0xx = std::max(k0xx, std::abs(kt.K0(x, x)));
          k0a = std::max(k0a, std::abs(kt.K0(x, a0) - 0.5 * kt.Q0(x)));
        }
        const auto& q1 = sc.pp.q1();
        for (std::size_t k = 0; k < q1.size(); ++k)
          k1a = std::max(k1a, std::abs(kt.K1(q1.node(k), cfg.a1) - (0.5 * q1[k] + alpha)));
        api = std::max(api, std::abs(kt.A(kPi, kPi)));
        if (2.0 * a0 <= kPi) api = std::max(api, std::abs(kt.A(kPi, 2.0 * a0)));
      }
    }
    c.require(k0xx < 1e-8, fmt("K0(x,x)=%.1e", k0xx));
    c.require(k0a < 1e-8, fmt("K0(x,a0)-Q0/2=%.1e", k0a));
    c.require(k1a < 1e-8, fmt("K1(x,a1)-q1/2-alpha=%.1e", k1a));
    c.require(api < 1e-8, fmt("A(pi,2a0),A(pi,pi)=%.1e", api));
    lines.push_back(c);
  }

  // Shared pencil runs for criteria 4 to 7.
  std::vector<PencilCase> cases;
  for (double a0 : {1.35, 2.0}) {
    const ProblemConfig cfg = make_config(a0, 1.9);
    for (const auto& sc : samples::all(cfg)) {
      PencilCase pc{sc.name + fmt("@a0=%.2f", a0), cfg, sc.pp, {}, {}, 0.0};
      const auto t0 = Clock::now();
      pc.fwd = forward(sc.pp, cfg, 200);
      for (int l = 0; l < 3; ++l)
        pc.inv[l] = invert(truncate(pc.fwd.s0, kLevels[l]), truncate(pc.fwd.s1, kLevels[l]), cfg);
      pc.seconds = seconds_since(t0);
      std::fprintf(stderr, "  %s done in %.1fs\n", pc.name.c_str(), pc.seconds);
      cases.push_back(std::move(pc));
    }
  }

  {
    Line c{4, "moment identities"};
    double fwd = 0.0, maps = 0.0, refwd = 0.0, info = 0.0;
    for (const auto& pc : cases) {
      const auto e = ParameterEstimate::from_potentials(pc.pp);
      fwd = std::max(fwd, max_of(moment_residuals(pc.pp.q0(), pc.pp.p(), pc.fwd.wt, e.omega, e.alpha0, e.alpha1,
                                                  pc.cfg.a1)));
      const Inversion& inv = pc.inv[2];
      const auto r = moment_residuals(inv.q0, inv.p, inv.wt, inv.est.omega, inv.est.alpha0, inv.est.alpha1, pc.cfg.a1);
      maps = std::max(maps, max_of(r, 3, 6));
      info = std::max(info, max_of(r, 0, 3));
      // forward representation of the reconstructed potentials
      const PotentialPair rec = PotentialPair::from_derivative(pc.cfg, inv.q0, inv.p);
      const WTable wr = compute_w_from_potentials(rec, KernelTable(rec, pc.cfg), pc.cfg);
      const auto er = ParameterEstimate::from_potentials(rec);
      refwd = std::max(refwd, max_of(moment_residuals(rec.q0(), rec.p(), wr, er.omega, er.alpha0, er.alpha1,
                                                      pc.cfg.a1)));
    }
    c.require(fwd < 1e-6, fmt("forward=%.1e", fwd));
    c.require(maps < 1e-6, fmt("reconstruction maps=%.1e", maps));
    c.require(refwd < 1e-6, fmt("forward of reconstruction=%.1e", refwd));
    c.note(fmt("w-hat vs fitted constants=%.1e", info));
    lines.push_back(c);
  }

  {
    Line c{5, "round trip N=200"};
    double worst = 0.0, slowest = 0.0;
    bool monotone = true;
    for (const auto& pc : cases) {
      double prev0 = 1e300, prev1 = 1e300;
      std::string row = pc.name + " q0/q1:";
      for (int l = 0; l < 3; ++l) {
        const double e0 = relative_l2(pc.inv[l].q0, pc.pp.q0());
        const double e1 = relative_l2(pc.inv[l].q1.q1, pc.pp.q1());
        row += fmt(" %.2e", e0) + fmt("/%.2e", e1);
        monotone = monotone && e0 < prev0 && e1 < prev1;
        prev0 = e0;
        prev1 = e1;
      }
      worst = std::max({worst, prev0, prev1});
      slowest = std::max(slowest, pc.seconds);
      c.note(row);
    }
    c.require(worst < 5e-2, fmt("max_rel_l2=%.2e", worst));
    c.require(monotone, std::string("monotone=") + (monotone ? "true" : "false"));
    c.require(slowest < 300.0, fmt("max_case_time=%.0fs", slowest));
    lines.push_back(c);
  }

  {
    Line c{6, "parameter identification"};
    const ProblemConfig cfg = make_config(2.0, 1.9);
    const cplx omega{0.3, -0.1}, alpha0{0.2, 0.0}, alpha1{-0.45, 0.05};
    const auto synth = [&](int j, cplx alpha) {
      Spectrum s;
      s.j = j;
      for (int n : Spectrum::indices(j, 100)) {
        const double r0 = anchor(n, j);
        s.entries[n] = r0 + (omega * std::cos(r0 * cfg.a0) + alpha * std::sin(r0 * cfg.a1)) / (kPi * n);
      }
      return s;
    };
    const ParameterEstimate es = estimate_parameters(synth(0, alpha0), synth(1, alpha1), cfg);
    const double synth_err = std::max(
        {std::abs(es.omega - omega), std::abs(es.alpha0 - alpha0), std::abs(es.alpha1 - alpha1)});
    double fwd_err = 0.0;
    for (const auto& pc : cases) {
      const auto e = ParameterEstimate::from_potentials(pc.pp);
      const ParameterEstimate f = estimate_parameters(truncate(pc.fwd.s0, 100), truncate(pc.fwd.s1, 100), pc.cfg);
      fwd_err = std::max({fwd_err, std::abs(f.omega - e.omega), std::abs(f.alpha0 - e.alpha0),
                          std::abs(f.alpha1 - e.alpha1)});
    }
    c.require(synth_err < 1e-10, fmt("synthetic=%.1e", synth_err));
    c.require(fwd_err < 2e-2, fmt("forward N=100=%.1e", fwd_err));
    lines.push_back(c);
  }

  {
    Line c{7, "solvability discrimination"};
    int accepted = 0, total = 0;
    bool parity = true;
    double tail = 0.0;
    for (const auto& pc : cases)
      for (const auto& inv : pc.inv) {
        ++total;
        if (inv.report.accepted()) ++accepted;
        for (int j = 0; j < 2; ++j)
          for (int nu = 0; nu < 2; ++nu) {
            parity = parity && inv.report.symmetry_ok[j][nu];
            tail = std::max(tail, inv.report.tail_fraction[j][nu]);
          }
      }
    bool rejected = true;
    for (double a0 : {1.35, 2.0}) {
      const ProblemConfig cfg = make_config(a0, 1.9);
      Spectrum moved = Spectrum::anchors(0, 200);
      moved.entries[1] = 1.37;
      const SolvabilityReport r = check_solvability(moved, Spectrum::anchors(1, 200), cfg);
      rejected = rejected && !r.type_ok[0][0] && !r.accepted();
      c.note(fmt("moved zero tail_00=%.2f", r.tail_fraction[0][0]));
    }
    c.require(accepted == total, "accepted=" + std::to_string(accepted) + "/" + std::to_string(total));
    c.require(parity, std::string("parity=") + (parity ? "true" : "false"));
    c.require(rejected, std::string("moved zero rejected=") + (rejected ? "true" : "false"));
    c.note(fmt("max_tail_accepted=%.1e", tail));
    lines.push_back(c);
  }

  {
    Line c{8, "conditional recovery of q0"};
    double worst = 0.0;
    bool accepted = true;
    for (double a0 : {1.1, 1.15}) {
      const ProblemConfig cfg = make_config(a0, 2.1);
      const std::pair<const char*, std::function<cplx(double)>> qs[2] = {
          {"constant", [](double) { return cplx{0.4}; }}, {"cos2x", [](double x) { return cplx{std::cos(2.0 * x)}; }}};
      for (const auto& [name, f] : qs) {
        const PotentialPair pp = samples::single_delay(cfg, f);
        const Forward fw = forward(pp, cfg, 200);
        const Inversion inv = invert(fw.s0, fw.s1, cfg);
        accepted = accepted && inv.report.accepted();
        const double e = kPi / 2 + a0 / 4;
        const auto known = SampledFunction::sample(1.5 * a0, e, 64, f);
        const cplx omega0 = gauss_integrate(f, e, kPi - a0, 64);
        const double err = relative_l2(recover_q0_conditional(inv.wt, known, omega0, cfg), pp.q0());
        worst = std::max(worst, err);
        c.note(std::string(name) + fmt("@a0=%.2f", a0) + fmt(" %.2e", err));
      }
    }
    c.require(worst < 5e-2, fmt("max_rel_l2=%.2e", worst));
    c.require(accepted, std::string("spectra accepted=") + (accepted ? "true" : "false"));
    lines.push_back(c);
  }

  {
    Line c{9, "one-delay operator"};
    double worst = 0.0;
    bool accepted = true, parity = true;
    for (double a : {1.35, 2.0}) {
      const ProblemConfig cfg = sl_config(a, ProblemConfig{});
      const std::pair<const char*, std::function<cplx(double)>> qs[2] = {
          {"constant", [](double) { return cplx{0.4}; }}, {"sin3x", [](double x) { return cplx{std::sin(3.0 * x)}; }}};
      for (const auto& [name, f] : qs) {
        const PotentialPair pp = samples::single_delay(cfg, f);
        const Forward fw = forward(pp, cfg, 200);
        const SLSpectrum l0 = sl_from_pencil(fw.s0), l1 = sl_from_pencil(fw.s1);
        const SolvabilityReport r = sl_check_solvability(l0, l1, a, cfg);
        accepted = accepted && r.accepted();
        for (int j = 0; j < 2; ++j) parity = parity && r.symmetry_ok[j][0];
        const double err = relative_l2(sl_invert(l0, l1, a, cfg), pp.q0());
        worst = std::max(worst, err);
        c.note(std::string(name) + fmt("@a=%.2f", a) + fmt(" %.2e", err));
      }
    }
    bool rejected = true;
    for (double a : {1.35, 2.0}) {
      SLSpectrum moved = SLSpectrum::anchors(0, 200);
      moved.entries[1] = 1.2;
      const SolvabilityReport r =
          sl_check_solvability(moved, SLSpectrum::anchors(1, 200), a, sl_config(a, ProblemConfig{}));
      rejected = rejected && !r.type_ok[0][0] && !r.accepted();
    }
    c.require(worst < 5e-2, fmt("max_rel_l2=%.2e", worst));
    c.require(accepted, std::string("accepted=") + (accepted ? "true" : "false"));
    c.require(parity, std::string("parity=") + (parity ? "true" : "false"));
    c.require(rejected, std::string("moved eigenvalue rejected=") + (rejected ? "true" : "false"));
    lines.push_back(c);
  }

  {
    Line c{10, "two-delay counterexample"};
    const auto t0 = Clock::now();
    const ProblemConfig cfg;
    for (const auto& [a1, a2] : {std::pair{1.7, 2.0}, std::pair{1.6, 2.4}}) {
      const CounterexampleReport r = verify_counterexample(a1, a2, cfg);
      c.require(r.regge_deviation < 1e-6, fmt("(%.1f,", a1) + fmt("%.1f) regge=", a2) + fmt("%.1e", r.regge_deviation));
      c.require(std::max(r.zero_deviation[0], r.zero_deviation[1]) < 1e-4,
                fmt("zeros=%.1e", std::max(r.zero_deviation[0], r.zero_deviation[1])));
      c.require(r.theta_identity < 1e-5, fmt("identities=%.1e", r.theta_identity));
    }
    const double dt = seconds_since(t0);
    c.require(dt < 60.0, fmt("time=%.1fs", dt));
    lines.push_back(c);
  }

  int passed = 0;
  for (const auto& c : lines) {
    if (c.pass) ++passed;
    std::string d;
    for (const auto& s : c.details) d += (d.empty() ? "" : "; ") + s;
    std::printf("%s %2d %s: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), d.c_str());
  }
  std::printf("%d/%zu criteria passed\n", passed, lines.size());
  return passed == static_cast<int>(lines.size()) ? 0 : 1;
}
