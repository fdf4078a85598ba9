#include "dpencil/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dpencil {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KeyValues& KeyValues::add(const std::string& key, const std::string& value) {
  items_.emplace_back(key, value);
  return *this;
}
KeyValues& KeyValues::add(const std::string& key, double value) { return add(key, format_number(value)); }
KeyValues& KeyValues::add(const std::string& key, int value) { return add(key, std::to_string(value)); }
KeyValues& KeyValues::add(const std::string& key, bool value) {
  return add(key, std::string(value ? "true" : "false"));
}
KeyValues& KeyValues::add(const std::string& key, cplx value) {
  return add(key, format_number(value.real()) + "," + format_number(value.imag()));
}

KeyValues& KeyValues::add_lines(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) add(line.substr(0, eq), line.substr(eq + 1));
  }
  return *this;
}

std::string KeyValues::text() const {
  std::string s;
  for (const auto& [k, v] : items_) s += k + "=" + v + "\n";
  return s;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Table {
  KeyValues header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  fs::path path;

  std::size_t column(const std::string& name) const {
    for (std::size_t k = 0; k < columns.size(); ++k)
      if (columns[k] == name) return k;
    throw ValidationError(path.string() + ": missing column '" + name + "'");
  }
  bool has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": not a number: '" << s << "'";
    throw ValidationError(os.str());
  }
  return v;
}

int parse_int(const std::string& s, const fs::path& path) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(path.string() + ": not an integer: '" + s + "'");
  return v;
}

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  Table t;
  t.path = path;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) t.header.add(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(line);
      continue;
    }
    auto row = split(line);
    if (row.size() != t.columns.size()) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": expected " << t.columns.size() << " fields, got " << row.size();
      throw ValidationError(os.str());
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ValidationError(path.string() + ": no column header");
  return t;
}

/// Uniform samples of (re, im) columns, skipping rows where they are empty.
SampledFunction column_function(const Table& t, const std::string& re, const std::string& im) {
  const std::size_t cx = t.column("x"), cr = t.column(re), ci = t.column(im);
  std::vector<double> xs;
  std::vector<cplx> vs;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row[cr].empty() && row[ci].empty()) continue;
    xs.push_back(parse_double(row[cx], t.path, r));
    vs.emplace_back(parse_double(row[cr], t.path, r), parse_double(row[ci], t.path, r));
  }
  if (xs.size() < 2) throw ValidationError(t.path.string() + ": fewer than two samples in " + re);
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (std::abs(xs[k] - xs[k - 1] - h) > 1e-9 * (1.0 + h)) {
      throw ValidationError(t.path.string() + ": samples of " + re + " are not on a uniform grid");
    }
  }
  return SampledFunction(xs.front(), xs.back(), std::move(vs));
}

}  // namespace

void KeyValues::write(const fs::path& path) const {
  auto out = open_out(path);
  out << text();
}

KeyValues KeyValues::read(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  KeyValues kv;
  kv.add_lines(ss.str());
  return kv;
}

std::string KeyValues::at(const std::string& key) const {
  for (const auto& [k, v] : items_)
    if (k == key) return v;
  throw ValidationError("missing key '" + key + "'");
}

void write_potentials(const fs::path& path, const PotentialPair& pp, const ProblemConfig& cfg) {
  write_potentials(path, pp.q0(), pp.q1(), pp.p(), cfg);
}

void write_potentials(const fs::path& path, const SampledFunction& q0, const SampledFunction& q1,
                      const SampledFunction& p, const ProblemConfig& cfg) {
  if (q1.size() != p.size()) throw ValidationError("q1 and p must share a grid");
  auto out = open_out(path);
  out << "# a0=" << format_number(cfg.a0) << "\n";
  out << "# a1=" << format_number(cfg.a1) << "\n";
  out << "# grid_size=" << cfg.grid_size << "\n";
  if (q0.size() > 0) out << "# h0=" << format_number(q0.step()) << "\n";
  out << "# h1=" << format_number(q1.step()) << "\n";
  out << "x,re_q0,im_q0,re_q1,im_q1,re_p,im_p\n";
  std::size_t i = 0, k = 0;
  const auto cell = [](cplx v) { return format_number(v.real()) + "," + format_number(v.imag()); };
  while (i < q0.size() || k < q1.size()) {
    const double x0 = i < q0.size() ? q0.node(i) : kPi + 1.0;
    const double x1 = k < q1.size() ? q1.node(k) : kPi + 1.0;
    const bool same = std::abs(x0 - x1) < 1e-12;
    if (same || x0 < x1) {
      out << format_number(x0) << "," << cell(q0[i]) << ",";
      if (same) out << cell(q1[k]) << "," << cell(p[k]);
      else out << ",,,";
      out << "\n";
      ++i;
      if (same) ++k;
    } else {
      out << format_number(x1) << ",,," << cell(q1[k]) << "," << cell(p[k]) << "\n";
      ++k;
    }
  }
}

PotentialPair read_potentials(const fs::path& path, ProblemConfig& cfg) {
  const Table t = read_table(path);
  cfg.a0 = parse_double(t.header.at("a0"), path, 0);
  cfg.a1 = parse_double(t.header.at("a1"), path, 0);
  cfg.grid_size = parse_int(t.header.at("grid_size"), path);
  cfg = validate_config(cfg);
  SampledFunction q0 = column_function(t, "re_q0", "im_q0");
  if (std::abs(q0.lo() - cfg.a0) > 1e-9 || std::abs(q0.hi() - kPi) > 1e-9)
    throw ValidationError(path.string() + ": q0 samples must span [a0, pi]");
  q0 = SampledFunction(cfg.a0, kPi, q0.values());
  if (t.has_column("re_p")) {
    const SampledFunction p = column_function(t, "re_p", "im_p");
    return PotentialPair::from_derivative(cfg, std::move(q0), SampledFunction(cfg.a1, kPi, p.values()));
  }
  const SampledFunction q1 = column_function(t, "re_q1", "im_q1");
  if (std::abs(q1.lo() - cfg.a1) > 1e-9 || std::abs(q1.hi() - kPi) > 1e-9)
    throw ValidationError(path.string() + ": q1 samples must span [a1, pi]");
  return PotentialPair::from_samples(cfg, std::move(q0), SampledFunction(cfg.a1, kPi, q1.values()));
}

void write_spectrum(const fs::path& path, const Spectrum& s) {
  auto out = open_out(path);
  out << "# j=" << s.j << "\n";
  out << "# N=" << s.complete_up_to() << "\n";
  out << "n,re_rho,im_rho\n";
  for (const auto& [n, rho] : s.entries)
    out << n << "," << format_number(rho.real()) << "," << format_number(rho.imag()) << "\n";
}

Spectrum read_spectrum(const fs::path& path) {
  const Table t = read_table(path);
  Spectrum s;
  s.j = parse_int(t.header.at("j"), path);
  if (s.j != 0 && s.j != 1) throw ValidationError(path.string() + ": j must be 0 or 1");
  const std::size_t cn = t.column("n"), cr = t.column("re_rho"), ci = t.column("im_rho");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    s.entries[parse_int(row[cn], path)] = {parse_double(row[cr], path, r), parse_double(row[ci], path, r)};
  }
  return s;
}

void write_sl_spectrum(const fs::path& path, const SLSpectrum& s) {
  auto out = open_out(path);
  out << "# j=" << s.j << "\n";
  out << "# N=" << s.complete_up_to() << "\n";
  out << "n,re_lambda,im_lambda\n";
  for (const auto& [n, lambda] : s.entries)
    out << n << "," << format_number(lambda.real()) << "," << format_number(lambda.imag()) << "\n";
}

SLSpectrum read_sl_spectrum(const fs::path& path) {
  const Table t = read_table(path);
  SLSpectrum s;
  s.j = parse_int(t.header.at("j"), path);
  if (s.j != 0 && s.j != 1) throw ValidationError(path.string() + ": j must be 0 or 1");
  const std::size_t cn = t.column("n"), cr = t.column("re_lambda"), ci = t.column("im_lambda");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const int n = parse_int(row[cn], path);
    if (n < 1) throw ValidationError(path.string() + ": eigenvalue indices start at 1");
    s.entries[n] = {parse_double(row[cr], path, r), parse_double(row[ci], path, r)};
  }
  return s;
}

void write_w_table(const fs::path& path, const WTable& wt, int nu) {
  auto out = open_out(path);
  const SampledFunction& w0 = wt.w(0, nu);
  const SampledFunction& w1 = wt.w(1, nu);
  out << "# nu=" << nu << "\n";
  out << "# omega=" << format_number(wt.omega.real()) << "," << format_number(wt.omega.imag()) << "\n";
  out << "# alpha0=" << format_number(wt.alpha0.real()) << "," << format_number(wt.alpha0.imag()) << "\n";
  out << "# alpha1=" << format_number(wt.alpha1.real()) << "," << format_number(wt.alpha1.imag()) << "\n";
  out << "y,re_w0" << nu << ",im_w0" << nu << ",re_w1" << nu << ",im_w1" << nu << "\n";
  for (std::size_t k = 0; k < w0.size(); ++k) {
    out << format_number(w0.node(k)) << "," << format_number(w0[k].real()) << "," << format_number(w0[k].imag())
        << "," << format_number(w1[k].real()) << "," << format_number(w1[k].imag()) << "\n";
  }
}

void write_function(const fs::path& path, const SampledFunction& f, const std::string& name) {
  auto out = open_out(path);
  out << "# lo=" << format_number(f.lo()) << "\n";
  out << "# hi=" << format_number(f.hi()) << "\n";
  out << "x,re_" << name << ",im_" << name << "\n";
  for (std::size_t k = 0; k < f.size(); ++k)
    out << format_number(f.node(k)) << "," << format_number(f[k].real()) << "," << format_number(f[k].imag()) << "\n";
}

SampledFunction read_function(const fs::path& path) {
  const Table t = read_table(path);
  if (t.columns.size() != 3) throw ValidationError(path.string() + ": expected columns x, re_f, im_f");
  return column_function(t, t.columns[1], t.columns[2]);
}

}  // namespace dpencil
