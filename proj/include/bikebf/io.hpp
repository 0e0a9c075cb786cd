#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bikebf/calibration.hpp"
#include "bikebf/dfr.hpp"
#include "bikebf/gf2.hpp"

namespace bikebf {

// Text fixture: one "name: v1,v2,..." line per field, '#' starts a comment,
// blank lines ignored. Recognized names: r (single integer), h0, h1, e, s
// (index lists; e indexes [0, 2r), s indexes [0, r)). Lists may be empty.
struct Fixture {
  std::optional<std::uint32_t> r;
  std::optional<std::vector<std::uint32_t>> h0;
  std::optional<std::vector<std::uint32_t>> h1;
  std::optional<std::vector<std::uint32_t>> e;
  std::optional<std::vector<std::uint32_t>> s;
};

Fixture parse_fixture(std::istream& in);             // ParseError on malformed text
Fixture read_fixture(const std::string& path);       // + std::runtime_error on IO failure
std::string format_fixture(const Fixture& f);        // fields in r, h0, h1, e, s order
void write_fixture(const std::string& path, const Fixture& f);

// Builds the key from a fixture; requires r, h0 and h1 to be present.
SparseKey key_from_fixture(const Fixture& f);

// Shortest round-trippable decimal of v ("%.12g", C locale, '.' separator).
std::string format_real(double v);

// CSV schemas (one header line, '\n' endings, counts as plain integers):
//   dfr:          r,trials,failures,dfr,ci_low,ci_high
//   extrapolation: slope,intercept,r_star,lambda
//   samples:      syndrome_weight,best_threshold
//   fit:          r_prime,a,b,n
void write_dfr_csv(const std::string& path, std::span<const DfrEstimate> estimates);
std::vector<DfrEstimate> read_dfr_csv(const std::string& path);
void write_extrapolation_csv(const std::string& path, const Extrapolation& ex);
void write_calibration_samples_csv(const std::string& path,
                                   std::span<const CalibrationSample> samples);
void write_fit_csv(const std::string& path, const FittedCoefficients& fit);

// Plot data for external tools: dfr rows are r,log2_dfr (zero-failure rows
// omitted — log2 undefined); calibration rows are
// syndrome_weight,best_threshold,fitted.
void write_dfr_plot_csv(const std::string& path, std::span<const DfrEstimate> estimates);
void write_calibration_plot_csv(const std::string& path,
                                std::span<const CalibrationSample> samples,
                                const FittedCoefficients& fit);

// Complete artifact sets rooted at `base`: sweep writes base.csv, base_plot.csv,
// base.gp and (when present) base_extrapolation.csv; calibration writes
// base_samples.csv, base_fit.csv, base_plot.csv, base.gp. Both return the
// paths written, in order.
std::vector<std::string> write_sweep_artifacts(const std::string& base,
                                               const SweepResult& result);
std::vector<std::string> write_calibration_artifacts(const std::string& base,
                                                     const CalibrationRun& run);

}  // namespace bikebf
