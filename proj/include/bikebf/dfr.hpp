#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bikebf/decoder.hpp"

namespace bikebf {

struct DfrEstimate {
  std::uint32_t r = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double dfr_point = 0.0;
  double ci_low = 0.0;   // 95% Clopper-Pearson exact binomial bounds
  double ci_high = 1.0;
};

// Exact binomial (Clopper-Pearson) 95% confidence interval for `failures`
// successes in `trials` draws, via beta-distribution quantiles.
std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t trials);

// Monte Carlo DFR over trials [first_trial, first_trial + trials): each trial
// samples a fresh key and weight-t error from StreamRng(master_seed,
// trial_index) and counts decode_and_check failures. The trial stream indexing
// makes the estimate independent of worker count, and two half-runs over
// [0, N/2) and [N/2, N) merge into exactly the full-run counts.
DfrEstimate estimate_dfr(const DecoderConfig& cfg, std::uint64_t trials,
                         std::uint64_t master_seed, unsigned workers = 1,
                         std::uint64_t first_trial = 0);

struct Extrapolation {
  double slope = 0.0;      // log2(DFR) per unit r, negative
  double intercept = 0.0;  // log2(DFR) at r = 0
  double r_star = 0.0;     // r where the line reaches log2(DFR) = -lambda
  std::uint32_t lambda = 0;
};

// Line fit in (r, log2 dfr) space, solved for the r where DFR = 2^-lambda.
// Uses exactly the two points with the lowest dfr (fit_all = true instead
// runs OLS over every nonzero point). Zero-dfr points are ignored. Throws
// NoExtrapolationError when fewer than 2 usable points with distinct r
// remain, or when the slope comes out >= 0.
Extrapolation extrapolate(std::span<const std::pair<double, double>> points,
                          std::uint32_t lambda, bool fit_all = false);

struct SweepResult {
  std::vector<DfrEstimate> estimates;
  std::optional<Extrapolation> extrapolation;
  std::string warning;  // set when the extrapolation had to be omitted
};

// DFR curve over ascending r values: per-r estimates with trials_per_r trials
// each (r value v uses master seed mix64(master_seed ^ v), so adding or
// removing r values does not disturb the others), then the extrapolation over
// the nonzero-failure points at cfg.params.security_lambda. An unusable fit
// (fewer than 2 nonzero points, or rising DFR) becomes a warning rather than
// an error, since noisy desk-scale sweeps hit it routinely.
SweepResult sweep(const DecoderConfig& cfg, std::span<const std::uint32_t> r_list,
                  std::uint64_t trials_per_r, std::uint64_t master_seed,
                  unsigned workers = 1, bool fit_all = false);

}  // namespace bikebf
