// Command-line front end. Every command writes its artifacts and a
// metrics.txt into --output. Exit codes: 0 success, 2 invalid input,
// 3 rejected by the solvability check, 4 numerical failure.

#include "dpencil/counterexample.hpp"
#include "dpencil/forward.hpp"
#include "dpencil/inverse.hpp"
#include "dpencil/io.hpp"
#include "dpencil/samples.hpp"
#include "dpencil/sl_delay.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace dpencil;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitRejected = 3;
constexpr int kExitNumerical = 4;
constexpr int kDefaultZeros = 100;

struct Options {
  std::vector<std::string> inputs;
  std::string output = "out";
  std::string example;
  std::optional<int> grid_size, n_zeros;
  std::optional<double> tolerance, a0, a1, a2;
};

ProblemConfig apply_overrides(ProblemConfig cfg, const Options& o) {
  if (o.grid_size) cfg.grid_size = *o.grid_size;
  if (o.tolerance) cfg.tolerance = *o.tolerance;
  return validate_config(cfg);
}

ProblemConfig delays_config(const Options& o, const char* command) {
  if (!o.a0 || !o.a1) throw ValidationError(std::string(command) + " needs --a0 and --a1");
  ProblemConfig cfg;
  cfg.a0 = *o.a0;
  cfg.a1 = *o.a1;
  return apply_overrides(cfg, o);
}

int zeros_wanted(const Options& o) {
  const int N = o.n_zeros.value_or(kDefaultZeros);
  if (N < 1) throw ValidationError("--n-zeros must be positive");
  return N;
}

/// From --example (with --a0/--a1, defaults 2.0 and 1.9) or from one potentials file.
PotentialPair load_potentials(const Options& o, ProblemConfig& cfg) {
  if (!o.example.empty()) {
    if (!o.inputs.empty()) throw ValidationError("give either --example or --input, not both");
    cfg.a0 = o.a0.value_or(2.0);
    cfg.a1 = o.a1.value_or(1.9);
    cfg = apply_overrides(cfg, o);
    return samples::by_name(o.example, cfg);
  }
  if (o.inputs.size() != 1) throw ValidationError("expected one potentials file (--input) or --example");
  if (o.a0 || o.a1) throw ValidationError("the delays of a potentials file come from its header");
  PotentialPair pp = read_potentials(o.inputs[0], cfg);
  cfg = apply_overrides(cfg, o);
  return pp;
}

template <class S>
S truncate(S s, int N) {
  std::erase_if(s.entries, [&](const auto& e) { return std::abs(e.first) > N || e.first < 1 - N; });
  return s;
}

std::pair<Spectrum, Spectrum> load_spectra(const Options& o) {
  if (o.inputs.size() != 2) throw ValidationError("expected two spectra files: --input j=0 --input j=1");
  Spectrum s0 = read_spectrum(o.inputs[0]), s1 = read_spectrum(o.inputs[1]);
  if (s0.j == 1 && s1.j == 0) std::swap(s0, s1);
  if (o.n_zeros) return {truncate(s0, *o.n_zeros), truncate(s1, *o.n_zeros)};
  return {s0, s1};
}

KeyValues base_metrics(const std::string& command, const ProblemConfig& cfg) {
  KeyValues m;
  m.add("command", command).add("a0", cfg.a0).add("a1", cfg.a1).add("grid_size", cfg.grid_size);
  m.add("tolerance", cfg.tolerance);
  return m;
}

void add_estimate(KeyValues& kv, const std::string& prefix, const ParameterEstimate& e) {
  kv.add(prefix + "omega", e.omega).add(prefix + "alpha0", e.alpha0).add(prefix + "alpha1", e.alpha1);
  kv.add(prefix + "residual_l2", e.residual_l2).add(prefix + "uncertainty", e.uncertainty);
}

struct Forward {
  WTable wt;
  Spectrum s0, s1;
  double max_residual = 0.0;
};

Forward run_forward(const PotentialPair& pp, const ProblemConfig& cfg, int N) {
  Forward f;
  const KernelTable kt(pp, cfg);
  f.wt = compute_w_from_potentials(pp, kt, cfg);
  const ParameterEstimate est = ParameterEstimate::from_potentials(pp);
  f.s0 = compute_spectrum(0, N, f.wt, est, cfg);
  f.s1 = compute_spectrum(1, N, f.wt, est, cfg);
  for (const Spectrum* s : {&f.s0, &f.s1})
    for (const auto& [n, rho] : s->entries)
      f.max_residual = std::max(f.max_residual, std::abs(evaluate_delta(s->j, rho, f.wt, cfg)));
  return f;
}

void add_forward_metrics(KeyValues& m, const Forward& f, int N) {
  m.add("N", N).add("omega", f.wt.omega).add("alpha0", f.wt.alpha0).add("alpha1", f.wt.alpha1);
  m.add("max_delta_at_zeros", f.max_residual);
  m.add("diagnostics", static_cast<int>(f.s0.diagnostics.size() + f.s1.diagnostics.size()));
}

int cmd_spectrum(const Options& o, bool with_w) {
  ProblemConfig cfg;
  const PotentialPair pp = load_potentials(o, cfg);
  const int N = zeros_wanted(o);
  const Forward f = run_forward(pp, cfg, N);
  const fs::path out = o.output;
  write_spectrum(out / "spectrum_0.csv", f.s0);
  write_spectrum(out / "spectrum_1.csv", f.s1);
  KeyValues m = base_metrics(with_w ? "forward" : "spectrum", cfg);
  add_forward_metrics(m, f, N);
  if (with_w) {
    write_potentials(out / "potentials.csv", pp, cfg);
    write_w_table(out / "w_0.csv", f.wt, 0);
    write_w_table(out / "w_1.csv", f.wt, 1);
    if (pp.p().max_abs() == 0.0) {
      write_sl_spectrum(out / "lambda_0.csv", sl_from_pencil(f.s0));
      write_sl_spectrum(out / "lambda_1.csv", sl_from_pencil(f.s1));
    }
  }
  m.write(out / "metrics.txt");
  for (const Spectrum* s : {&f.s0, &f.s1})
    for (const std::string& d : s->diagnostics) std::cerr << "warning: " << d << "\n";
  std::cout << "wrote " << f.s0.entries.size() + f.s1.entries.size() << " zeros to " << out.string() << "\n";
  return 0;
}

KeyValues inversion_report(const Inversion& inv) {
  KeyValues r;
  r.add_lines(inv.report.summary());
  add_estimate(r, "", inv.est);
  r.add("q0_recovered", inv.q0.size() > 0);
  r.add("q1_discrepancy", inv.q1.discrepancy).add("q1_consistent", inv.q1.consistent);
  return r;
}

int cmd_invert(const Options& o) {
  const ProblemConfig cfg = delays_config(o, "invert");
  const auto [s0, s1] = load_spectra(o);
  const Inversion inv = invert(s0, s1, cfg);
  const fs::path out = o.output;
  write_potentials(out / "potentials.csv", inv.q0, inv.q1.q1, inv.p, cfg);
  inversion_report(inv).write(out / "report.txt");
  KeyValues m = base_metrics("invert", cfg);
  m.add("N", inv.N).add("accepted", inv.report.accepted());
  add_estimate(m, "fit_", inv.fit);
  add_estimate(m, "", inv.est);
  m.write(out / "metrics.txt");
  if (!cfg.full_inversion) std::cerr << "note: a0 < 2pi/5, q0 is not determined by the spectra\n";
  std::cout << "accepted=" << (inv.report.accepted() ? "true" : "false") << "\n";
  return inv.report.accepted() ? 0 : kExitRejected;
}

int cmd_check(const Options& o) {
  const ProblemConfig cfg = delays_config(o, "check");
  const auto [s0, s1] = load_spectra(o);
  const SolvabilityReport r = check_solvability(s0, s1, cfg);
  const ParameterEstimate est = refine_parameters(s0, s1, estimate_parameters(s0, s1, cfg), cfg);
  KeyValues rep;
  rep.add_lines(r.summary());
  add_estimate(rep, "", est);
  const fs::path out = o.output;
  rep.write(out / "report.txt");
  KeyValues m = base_metrics("check", cfg);
  m.add("N", r.N).add("accepted", r.accepted()).add("residual_l2", r.residual_l2);
  m.write(out / "metrics.txt");
  std::cout << r.summary();
  return r.accepted() ? 0 : kExitRejected;
}

int cmd_roundtrip(const Options& o) {
  ProblemConfig cfg;
  const PotentialPair pp = load_potentials(o, cfg);
  const int N = zeros_wanted(o);
  const Forward f = run_forward(pp, cfg, N);
  const Inversion inv = invert(f.s0, f.s1, cfg);
  const fs::path out = o.output;
  write_potentials(out / "input_potentials.csv", pp, cfg);
  write_potentials(out / "potentials.csv", inv.q0, inv.q1.q1, inv.p, cfg);
  write_spectrum(out / "spectrum_0.csv", f.s0);
  write_spectrum(out / "spectrum_1.csv", f.s1);
  inversion_report(inv).write(out / "report.txt");

  KeyValues m = base_metrics("roundtrip", cfg);
  add_forward_metrics(m, f, N);
  m.add("accepted", inv.report.accepted());
  if (inv.q0.size() > 0) {
    m.add("q0_relative_l2", relative_l2(inv.q0, pp.q0())).add("q0_sup", sup_distance(inv.q0, pp.q0()));
  }
  m.add("q1_relative_l2", relative_l2(inv.q1.q1, pp.q1())).add("q1_sup", sup_distance(inv.q1.q1, pp.q1()));
  m.add("p_relative_l2", relative_l2(inv.p, pp.p()));
  m.write(out / "metrics.txt");
  std::cout << m.text();
  return inv.report.accepted() ? 0 : kExitRejected;
}

int cmd_sl_invert(const Options& o) {
  if (!o.a0) throw ValidationError("sl-invert needs --a0 (the delay a)");
  if (o.inputs.size() != 2) throw ValidationError("expected two eigenvalue files: --input j=0 --input j=1");
  SLSpectrum s0 = read_sl_spectrum(o.inputs[0]), s1 = read_sl_spectrum(o.inputs[1]);
  if (s0.j == 1 && s1.j == 0) std::swap(s0, s1);
  if (o.n_zeros) {
    s0 = truncate(s0, *o.n_zeros);
    s1 = truncate(s1, *o.n_zeros);
  }
  const ProblemConfig cfg = sl_config(*o.a0, apply_overrides(ProblemConfig{}, o));
  const SolvabilityReport r = sl_check_solvability(s0, s1, *o.a0, cfg);
  const ParameterEstimate est = sl_estimate_omega(s0, s1, *o.a0);
  const SampledFunction q = sl_invert(s0, s1, *o.a0, cfg);
  const fs::path out = o.output;
  write_function(out / "q.csv", q, "q");
  KeyValues rep;
  rep.add_lines(r.summary());
  rep.add("omega", est.omega).add("omega_uncertainty", est.uncertainty);
  rep.write(out / "report.txt");
  KeyValues m = base_metrics("sl-invert", cfg);
  m.add("a", *o.a0).add("N", r.N).add("accepted", r.accepted()).add("omega", est.omega);
  m.write(out / "metrics.txt");
  std::cout << "accepted=" << (r.accepted() ? "true" : "false") << "\n";
  return r.accepted() ? 0 : kExitRejected;
}

int cmd_counterexample(const Options& o) {
  const ProblemConfig cfg = apply_overrides(ProblemConfig{}, o);
  const double a1 = o.a1.value_or(1.7), a2 = o.a2.value_or(2.0);
  const CounterexampleReport r = verify_counterexample(a1, a2, cfg);
  const fs::path out = o.output;
  KeyValues rep;
  rep.add_lines(r.summary());
  rep.write(out / "report.txt");
  KeyValues m;
  m.add("command", std::string("counterexample")).add("a1", a1).add("a2", a2).add("grid_size", cfg.grid_size);
  m.add("passed", r.passed()).add("regge_deviation", r.regge_deviation);
  m.write(out / "metrics.txt");
  std::cout << r.summary();
  return r.passed() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward and inverse spectral problems for a pencil with two delays"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--input", o.inputs, "input file (repeatable)");
    sub->add_option("--output", o.output, "output directory")->capture_default_str();
    sub->add_option("--grid-size", o.grid_size, "samples per unit length");
    sub->add_option("--n-zeros", o.n_zeros, "number of zeros N per spectrum");
    sub->add_option("--tolerance", o.tolerance, "numerical tolerance");
    sub->add_option("--a0", o.a0, "delay a0 (sl-invert: the delay a)");
    sub->add_option("--a1", o.a1, "delay a1");
    return sub;
  };
  auto* forward = common(app.add_subcommand("forward", "potentials -> spectra, w-tables"));
  auto* spectrum = common(app.add_subcommand("spectrum", "potentials -> spectra"));
  auto* inv = common(app.add_subcommand("invert", "two spectra -> potentials and solvability report"));
  auto* roundtrip = common(app.add_subcommand("roundtrip", "potentials -> spectra -> potentials"));
  auto* check = common(app.add_subcommand("check", "two spectra -> solvability report"));
  auto* sl = common(app.add_subcommand("sl-invert", "eigenvalues of the one-delay problem -> q"));
  auto* cx = common(app.add_subcommand("counterexample", "two-delay non-uniqueness example"));
  for (CLI::App* sub : {forward, spectrum, roundtrip})
    sub->add_option("--example", o.example, "built-in pair: constant, trig, jump, single, zero");
  cx->add_option("--a2", o.a2, "second delay of the two-delay equation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*forward) return cmd_spectrum(o, true);
    if (*spectrum) return cmd_spectrum(o, false);
    if (*inv) return cmd_invert(o);
    if (*roundtrip) return cmd_roundtrip(o);
    if (*check) return cmd_check(o);
    if (*sl) return cmd_sl_invert(o);
    if (*cx) return cmd_counterexample(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
