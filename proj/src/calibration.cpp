#include "bikebf/calibration.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bikebf/errors.hpp"

namespace bikebf {

CalibrationSample best_first_threshold(const SparseKey& key, const BitVector& e,
                                       const DecoderConfig& cfg, std::uint32_t lo,
                                       std::uint32_t hi) {
  if (lo > hi) throw std::invalid_argument("best_first_threshold: empty candidate range");
  if (e.size() != 2 * static_cast<std::size_t>(key.r()))
    throw std::invalid_argument("best_first_threshold: error length != 2r");

  const BitVector s0 = syndrome(key, e);
  CalibrationSample sample;
  sample.initial_syndrome_weight = s0.popcount();

  std::uint64_t best_weight = ~std::uint64_t{0};
  std::vector<std::uint32_t> scratch;
  for (std::uint32_t t = lo; t <= hi; ++t) {
    BitVector s = s0;
    BitVector e_est(2 * static_cast<std::size_t>(key.r()));
    std::int64_t tracked = static_cast<std::int64_t>(sample.initial_syndrome_weight);
    // Apply base + delta, mirroring the decoder's first iteration which uses
    // f(|s0|) + delta; the recorded (and later fitted) value is the base.
    const std::int64_t applied =
        static_cast<std::int64_t>(t) + static_cast<std::int64_t>(cfg.params.delta);
    run_iteration(key, Rational(applied), cfg.block_size, s, e_est, tracked, 1, nullptr,
                  scratch);
    const std::uint64_t w = s.popcount();
    if (w < best_weight) {  // strict: ties keep the smaller threshold
      best_weight = w;
      sample.best_threshold = t;
    }
  }
  return sample;
}

FittedCoefficients least_squares_fit(std::span<const CalibrationSample> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw DegenerateFitError("least_squares_fit: need at least 2 samples");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const CalibrationSample& s : samples) {
    mean_x += static_cast<double>(s.initial_syndrome_weight);
    mean_y += static_cast<double>(s.best_threshold);
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (const CalibrationSample& s : samples) {
    const double dx = static_cast<double>(s.initial_syndrome_weight) - mean_x;
    const double dy = static_cast<double>(s.best_threshold) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  if (sxx == 0.0)
    throw DegenerateFitError("least_squares_fit: all syndrome weights equal, slope undefined");
  FittedCoefficients fit;
  fit.a = sxy / sxx;
  fit.b = mean_y - fit.a * mean_x;
  fit.num_samples = n;
  return fit;
}

CalibrationRun calibrate(std::uint32_t r_prime, const CodeParams& params,
                         std::uint64_t num_samples, std::uint64_t master_seed,
                         std::size_t block_size, std::uint32_t lo, std::uint32_t hi,
                         unsigned workers) {
  if (num_samples < 100)
    throw std::invalid_argument("calibrate: need at least 100 samples for a usable fit");
  CodeParams p = params;
  p.r = r_prime;
  p.validate();
  DecoderConfig cfg;
  cfg.params = p;
  cfg.block_size = block_size;

  CalibrationRun run;
  run.samples.resize(num_samples);
  if (workers == 0) workers = 1;

  std::atomic<std::uint64_t> next_trial{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker_fn = [&]() {
    try {
      for (;;) {
        const std::uint64_t i = next_trial.fetch_add(1);
        if (i >= num_samples || failed.load()) return;
        StreamRng rng(master_seed, i);
        KeygenResult kg = keygen(r_prime, p.d(), rng);
        BitVector e = sample_error(r_prime, p.t, rng);
        run.samples[i] = best_first_threshold(kg.key, e, cfg, lo, hi);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true);
    }
  };

  if (workers == 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  run.fit = least_squares_fit(run.samples);
  run.fit.r_prime = r_prime;
  return run;
}

}  // namespace bikebf
