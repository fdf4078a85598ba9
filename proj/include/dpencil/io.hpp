#pragma once

// Flat-file formats. Every file is comma-separated text: '#'-prefixed
// "key=value" header lines, one column-name line, then data rows. Numbers are
// written with 17 significant digits so a write/read cycle is exact.

#include "dpencil/core.hpp"
#include "dpencil/forward.hpp"
#include "dpencil/sl_delay.hpp"

#include <filesystem>

namespace dpencil {

/// Ordered key=value pairs; the format of reports and metrics files.
class KeyValues {
 public:
  KeyValues& add(const std::string& key, const std::string& value);
  KeyValues& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
  KeyValues& add(const std::string& key, double value);
  KeyValues& add(const std::string& key, int value);
  KeyValues& add(const std::string& key, bool value);
  KeyValues& add(const std::string& key, cplx value);
  /// Appends "key=value" lines of an existing summary.
  KeyValues& add_lines(const std::string& text);

  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }
  std::string text() const;
  void write(const std::filesystem::path& path) const;
  static KeyValues read(const std::filesystem::path& path);
  /// Value of key; throws ValidationError when absent.
  std::string at(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

std::string format_number(double v);

/// Potentials: header a0, a1, grid_size; rows x, Re q0, Im q0, Re q1, Im q1,
/// Re p, Im p on the union of both grids, fields empty where that potential
/// has no node. On read, p (when present) takes precedence over q1: q1 alone
/// would have to be differentiated, which smears jumps of p.
void write_potentials(const std::filesystem::path& path, const PotentialPair& pp, const ProblemConfig& cfg);
/// Same layout from separate samples; q0 may be empty (no samples) when it was not recovered.
void write_potentials(const std::filesystem::path& path, const SampledFunction& q0, const SampledFunction& q1,
                      const SampledFunction& p, const ProblemConfig& cfg);
/// Reads the delays and grid_size into cfg (other fields kept) and rebuilds the pair.
PotentialPair read_potentials(const std::filesystem::path& path, ProblemConfig& cfg);

/// Spectrum: header j, N; rows n, Re rho, Im rho.
void write_spectrum(const std::filesystem::path& path, const Spectrum& s);
Spectrum read_spectrum(const std::filesystem::path& path);

/// Eigenvalue spectrum of the one-delay problem: header j, N; rows n, Re lambda, Im lambda.
void write_sl_spectrum(const std::filesystem::path& path, const SLSpectrum& s);
SLSpectrum read_sl_spectrum(const std::filesystem::path& path);

/// w_{0,nu}, w_{1,nu} on [0, pi - a_nu]: header nu, omega, alpha0, alpha1; rows y, Re/Im w0nu, Re/Im w1nu.
void write_w_table(const std::filesystem::path& path, const WTable& wt, int nu);

/// One sampled function: rows x, Re f, Im f.
void write_function(const std::filesystem::path& path, const SampledFunction& f, const std::string& name);
SampledFunction read_function(const std::filesystem::path& path);

}  // namespace dpencil
