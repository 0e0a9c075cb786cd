#include "bikebf/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string_view>

#include "bikebf/errors.hpp"

namespace bikebf {

namespace {

std::string trim(std::string_view v) {
  std::size_t b = v.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = v.find_last_not_of(" \t\r");
  return std::string(v.substr(b, e - b + 1));
}

std::uint32_t parse_u32(const std::string& text, const std::string& context) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected unsigned integer in " + context + ", got '" + text + "'");
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || *end != '\0' || v > std::numeric_limits<std::uint32_t>::max())
    throw ParseError("integer out of range in " + context + ": '" + text + "'");
  return static_cast<std::uint32_t>(v);
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected unsigned integer in " + context + ", got '" + text + "'");
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || *end != '\0') throw ParseError("integer out of range in " + context);
  return v;
}

double parse_double(const std::string& text, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || errno != 0 || end != text.c_str() + text.size())
    throw ParseError("expected number in " + context + ", got '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::uint32_t> parse_index_list(const std::string& text, const std::string& key) {
  std::vector<std::uint32_t> out;
  if (trim(text).empty()) return out;
  for (const std::string& part : split(text, ','))
    out.push_back(parse_u32(trim(part), "field '" + key + "'"));
  return out;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string join_indices(std::span<const std::uint32_t> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) out.push_back(',');
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

Fixture parse_fixture(std::istream& in) {
  Fixture f;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("fixture line " + std::to_string(lineno) + ": missing ':'");
    const std::string key = trim(line.substr(0, colon));
    const std::string value = line.substr(colon + 1);
    if (key == "r") {
      if (f.r) throw ParseError("fixture: duplicate field 'r'");
      f.r = parse_u32(trim(value), "field 'r'");
    } else {
      std::optional<std::vector<std::uint32_t>>* slot = nullptr;
      if (key == "h0") slot = &f.h0;
      else if (key == "h1") slot = &f.h1;
      else if (key == "e") slot = &f.e;
      else if (key == "s") slot = &f.s;
      else throw ParseError("fixture line " + std::to_string(lineno) + ": unknown field '" + key + "'");
      if (*slot) throw ParseError("fixture: duplicate field '" + key + "'");
      *slot = parse_index_list(value, key);
    }
  }
  return f;
}

Fixture read_fixture(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return parse_fixture(in);
}

std::string format_fixture(const Fixture& f) {
  std::string out;
  if (f.r) out += "r: " + std::to_string(*f.r) + "\n";
  if (f.h0) out += "h0: " + join_indices(*f.h0) + "\n";
  if (f.h1) out += "h1: " + join_indices(*f.h1) + "\n";
  if (f.e) out += "e: " + join_indices(*f.e) + "\n";
  if (f.s) out += "s: " + join_indices(*f.s) + "\n";
  return out;
}

void write_fixture(const std::string& path, const Fixture& f) {
  std::ofstream out = open_for_write(path);
  out << format_fixture(f);
  finish_write(out, path);
}

SparseKey key_from_fixture(const Fixture& f) {
  if (!f.r || !f.h0 || !f.h1)
    throw ParseError("fixture does not define a key (needs r, h0 and h1)");
  return SparseKey(*f.r, *f.h0, *f.h1);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_dfr_csv(const std::string& path, std::span<const DfrEstimate> estimates) {
  std::ofstream out = open_for_write(path);
  out << "r,trials,failures,dfr,ci_low,ci_high\n";
  for (const DfrEstimate& e : estimates)
    out << e.r << ',' << e.trials << ',' << e.failures << ',' << format_real(e.dfr_point)
        << ',' << format_real(e.ci_low) << ',' << format_real(e.ci_high) << '\n';
  finish_write(out, path);
}

std::vector<DfrEstimate> read_dfr_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "r,trials,failures,dfr,ci_low,ci_high")
    throw ParseError("dfr csv '" + path + "': bad or missing header");
  std::vector<DfrEstimate> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> cols = split(trim(line), ',');
    if (cols.size() != 6)
      throw ParseError("dfr csv line " + std::to_string(lineno) + ": expected 6 columns");
    const std::string ctx = "dfr csv line " + std::to_string(lineno);
    DfrEstimate e;
    e.r = parse_u32(cols[0], ctx);
    e.trials = parse_u64(cols[1], ctx);
    e.failures = parse_u64(cols[2], ctx);
    e.dfr_point = parse_double(cols[3], ctx);
    e.ci_low = parse_double(cols[4], ctx);
    e.ci_high = parse_double(cols[5], ctx);
    out.push_back(e);
  }
  return out;
}

void write_extrapolation_csv(const std::string& path, const Extrapolation& ex) {
  std::ofstream out = open_for_write(path);
  out << "slope,intercept,r_star,lambda\n"
      << format_real(ex.slope) << ',' << format_real(ex.intercept) << ','
      << format_real(ex.r_star) << ',' << ex.lambda << '\n';
  finish_write(out, path);
}

void write_calibration_samples_csv(const std::string& path,
                                   std::span<const CalibrationSample> samples) {
  std::ofstream out = open_for_write(path);
  out << "syndrome_weight,best_threshold\n";
  for (const CalibrationSample& s : samples)
    out << s.initial_syndrome_weight << ',' << s.best_threshold << '\n';
  finish_write(out, path);
}

void write_fit_csv(const std::string& path, const FittedCoefficients& fit) {
  std::ofstream out = open_for_write(path);
  out << "r_prime,a,b,n\n"
      << fit.r_prime << ',' << format_real(fit.a) << ',' << format_real(fit.b) << ','
      << fit.num_samples << '\n';
  finish_write(out, path);
}

void write_dfr_plot_csv(const std::string& path, std::span<const DfrEstimate> estimates) {
  std::ofstream out = open_for_write(path);
  out << "r,log2_dfr\n";
  for (const DfrEstimate& e : estimates) {
    if (e.failures == 0) continue;
    out << e.r << ',' << format_real(std::log2(e.dfr_point)) << '\n';
  }
  finish_write(out, path);
}

void write_calibration_plot_csv(const std::string& path,
                                std::span<const CalibrationSample> samples,
                                const FittedCoefficients& fit) {
  std::ofstream out = open_for_write(path);
  out << "syndrome_weight,best_threshold,fitted\n";
  for (const CalibrationSample& s : samples) {
    const double x = static_cast<double>(s.initial_syndrome_weight);
    out << s.initial_syndrome_weight << ',' << s.best_threshold << ','
        << format_real(fit.a * x + fit.b) << '\n';
  }
  finish_write(out, path);
}

std::vector<std::string> write_sweep_artifacts(const std::string& base,
                                               const SweepResult& result) {
  std::vector<std::string> paths;
  write_dfr_csv(base + ".csv", result.estimates);
  paths.push_back(base + ".csv");
  if (result.extrapolation) {
    write_extrapolation_csv(base + "_extrapolation.csv", *result.extrapolation);
    paths.push_back(base + "_extrapolation.csv");
  }
  write_dfr_plot_csv(base + "_plot.csv", result.estimates);
  paths.push_back(base + "_plot.csv");

  std::ofstream gp = open_for_write(base + ".gp");
  gp << "set datafile separator ','\n"
     << "set xlabel 'r'\n"
     << "set ylabel 'log2 DFR'\n"
     << "set key left bottom\n";
  if (result.extrapolation) {
    gp << "slope = " << format_real(result.extrapolation->slope) << "\n"
       << "intercept = " << format_real(result.extrapolation->intercept) << "\n"
       << "plot '" << base << "_plot.csv' skip 1 using 1:2 with points title 'measured', \\\n"
       << "     slope*x + intercept with lines title 'extrapolation'\n";
  } else {
    gp << "plot '" << base << "_plot.csv' skip 1 using 1:2 with points title 'measured'\n";
  }
  finish_write(gp, base + ".gp");
  paths.push_back(base + ".gp");
  return paths;
}

std::vector<std::string> write_calibration_artifacts(const std::string& base,
                                                     const CalibrationRun& run) {
  std::vector<std::string> paths;
  write_calibration_samples_csv(base + "_samples.csv", run.samples);
  paths.push_back(base + "_samples.csv");
  write_fit_csv(base + "_fit.csv", run.fit);
  paths.push_back(base + "_fit.csv");
  write_calibration_plot_csv(base + "_plot.csv", run.samples, run.fit);
  paths.push_back(base + "_plot.csv");

  std::ofstream gp = open_for_write(base + ".gp");
  gp << "set datafile separator ','\n"
     << "set xlabel 'initial syndrome weight'\n"
     << "set ylabel 'best first-iteration threshold'\n"
     << "plot '" << base << "_plot.csv' skip 1 using 1:2 with points title 'samples', \\\n"
     << "     '" << base << "_plot.csv' skip 1 using 1:3 with lines title 'fit'\n";
  finish_write(gp, base + ".gp");
  paths.push_back(base + ".gp");
  return paths;
}

}  // namespace bikebf
