#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bikebf/decoder.hpp"

namespace bikebf {

// One calibration observation: the initial syndrome weight of a fresh
// (key, error) instance and the integer threshold base T whose applied
// first-iteration threshold T + delta left the smallest syndrome weight.
// The base is the fitted quantity because the decoder re-adds delta on top
// of f(|s0|) in its first iteration.
struct CalibrationSample {
  std::uint64_t initial_syndrome_weight = 0;
  std::uint32_t best_threshold = 0;

  bool operator==(const CalibrationSample&) const = default;
};

// Ordinary least squares of best_threshold on initial_syndrome_weight.
struct FittedCoefficients {
  double a = 0.0;
  double b = 0.0;
  std::uint32_t r_prime = 0;
  std::uint64_t num_samples = 0;
};

// Tries every integer base T in [lo, hi], running one decoding iteration
// (same block schedule as cfg.block_size) with the constant threshold
// T + cfg.params.delta — the same offset the decoder adds to f(|s0|) in its
// first iteration — and returns the base minimizing the after-iteration
// syndrome weight; ties go to the smallest base. The threshold function
// itself plays no part here — the procedure is what produces its
// coefficients in the first place.
CalibrationSample best_first_threshold(const SparseKey& key, const BitVector& e,
                                       const DecoderConfig& cfg, std::uint32_t lo,
                                       std::uint32_t hi);

// Exact OLS minimizer: a = cov(x, y)/var(x), b = mean(y) - a*mean(x).
// Throws DegenerateFitError with fewer than 2 samples or all x equal.
FittedCoefficients least_squares_fit(std::span<const CalibrationSample> samples);

struct CalibrationRun {
  FittedCoefficients fit;
  std::vector<CalibrationSample> samples;  // indexed by trial, worker-order independent
};

// Full calibration at circulant size r_prime: num_samples fresh (key, error)
// instances (params supplies w and t; params.r is ignored in favor of
// r_prime), each contributing one best_first_threshold sample over [lo, hi],
// then the least-squares fit. Trial i draws from StreamRng(master_seed, i),
// so the result is byte-identical for any worker count.
CalibrationRun calibrate(std::uint32_t r_prime, const CodeParams& params,
                         std::uint64_t num_samples, std::uint64_t master_seed,
                         std::size_t block_size = 32, std::uint32_t lo = 30,
                         std::uint32_t hi = 60, unsigned workers = 1);

}  // namespace bikebf
