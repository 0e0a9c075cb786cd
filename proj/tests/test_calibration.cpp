#include <cmath>
#include <cstdint>
#include <vector>

#include "bikebf/calibration.hpp"
#include "bikebf/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using bikebf::BitVector;
using bikebf::CalibrationSample;
using bikebf::CodeParams;
using bikebf::DecoderConfig;
using bikebf::SparseKey;
using bikebf::StreamRng;
using bikebf::ThresholdCoefficients;

namespace {

DecoderConfig desk_config(std::uint32_t r, std::uint32_t d, std::uint32_t t,
                          std::size_t block_size) {
  DecoderConfig cfg;
  cfg.params = CodeParams{r, 2 * d, t, 128, 1, 7};
  cfg.coeffs = ThresholdCoefficients::from_decimal("0", "0");
  cfg.block_size = block_size;
  return cfg;
}

// Reference: for every candidate base, run one dense-matrix iteration at the
// applied threshold base + delta (as the decoder's first iteration would) and
// keep the first base attaining the minimum weight.
CalibrationSample ref_best(const oracle::DenseH& dense, const std::vector<std::uint8_t>& s0,
                           std::uint32_t lo, std::uint32_t hi, std::uint32_t delta,
                           bool deferred) {
  CalibrationSample best;
  best.initial_syndrome_weight = oracle::weight(s0);
  std::uint64_t best_weight = ~std::uint64_t{0};
  for (std::uint32_t cand = lo; cand <= hi; ++cand) {
    const std::uint32_t applied = cand + delta;
    std::vector<std::uint8_t> s = s0;
    std::vector<std::uint8_t> e(2 * static_cast<std::size_t>(dense.r), 0);
    const std::size_t n = e.size();
    if (deferred) {
      std::vector<std::uint32_t> sigmas(n);
      for (std::size_t j = 0; j < n; ++j) sigmas[j] = dense.sigma(s, j);
      for (std::size_t j = 0; j < n; ++j)
        if (sigmas[j] >= applied) dense.xor_column(s, j);
    } else {
      for (std::size_t j = 0; j < n; ++j)
        if (dense.sigma(s, j) >= applied) dense.xor_column(s, j);
    }
    std::uint64_t w = oracle::weight(s);
    if (w < best_weight) {
      best_weight = w;
      best.best_threshold = cand;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("best_first_threshold agrees with an exhaustive dense search") {
  StreamRng rng(71, 0);
  for (int trial = 0; trial < 40; ++trial) {
    std::uint32_t r = 13 + static_cast<std::uint32_t>(rng.uniform_below(20));
    std::uint32_t d = 3 + static_cast<std::uint32_t>(rng.uniform_below(4));
    std::uint32_t t = 2 + static_cast<std::uint32_t>(rng.uniform_below(5));
    SparseKey key(r, oracle::random_support(r, d, rng), oracle::random_support(r, d, rng));
    BitVector e = bikebf::sample_error(r, t, rng);
    oracle::DenseH dense(r, key.h0(), key.h1());
    auto s0 = dense.syndrome(oracle::to_bytes(e));

    CAPTURE(trial);
    // One block over all columns == deferred reference (desk delta = 1).
    auto got = bikebf::best_first_threshold(key, e, desk_config(r, d, t, 0), 1, d);
    auto want = ref_best(dense, s0, 1, d, 1, /*deferred=*/true);
    CHECK(got.initial_syndrome_weight == want.initial_syndrome_weight);
    CHECK(got.best_threshold == want.best_threshold);

    // Column-layered candidates == immediate reference.
    auto got1 = bikebf::best_first_threshold(key, e, desk_config(r, d, t, 1), 1, d);
    auto want1 = ref_best(dense, s0, 1, d, 1, /*deferred=*/false);
    CHECK(got1.best_threshold == want1.best_threshold);
  }
}

TEST_CASE("best_first_threshold tie-break and argument checks") {
  SparseKey key(13, {0, 1, 3}, {0, 2, 7});
  // Weight-0 error: every candidate already sits at weight 0, so the smallest
  // candidate wins the tie.
  BitVector e(26);
  auto s = bikebf::best_first_threshold(key, e, desk_config(13, 3, 0, 0), 2, 5);
  CHECK(s.initial_syndrome_weight == 0);
  CHECK(s.best_threshold == 2);

  CHECK_THROWS_AS(bikebf::best_first_threshold(key, e, desk_config(13, 3, 0, 0), 5, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(bikebf::best_first_threshold(key, BitVector(13), desk_config(13, 3, 0, 0),
                                               1, 3),
                  std::invalid_argument);
}

TEST_CASE("least_squares_fit recovers planted lines exactly") {
  // y = x/2 + 3 over even x: every quantity is a small dyadic, so the double
  // arithmetic is exact.
  std::vector<CalibrationSample> line;
  for (std::uint64_t x : {10u, 20u, 30u, 40u})
    line.push_back({x, static_cast<std::uint32_t>(x / 2 + 3)});
  auto fit = bikebf::least_squares_fit(line);
  CHECK(fit.a == 0.5);
  CHECK(fit.b == 3.0);
  CHECK(fit.num_samples == 4);

  std::vector<CalibrationSample> two = {{100, 30}, {200, 40}};
  auto fit2 = bikebf::least_squares_fit(two);
  CHECK(fit2.a == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(fit2.b == doctest::Approx(20.0).epsilon(1e-15));
}

TEST_CASE("least_squares_fit on non-collinear data") {
  std::vector<CalibrationSample> v = {{0, 1}, {1, 0}, {2, 1}};
  auto fit = bikebf::least_squares_fit(v);
  CHECK(fit.a == 0.0);
  CHECK(fit.b == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // Normal equations: residuals are orthogonal to [1, x].
  std::vector<CalibrationSample> noisy = {{31, 4}, {44, 7}, {52, 6}, {60, 9}, {75, 11},
                                          {83, 12}, {90, 15}, {97, 14}};
  auto f = bikebf::least_squares_fit(noisy);
  double sum_res = 0.0, sum_xres = 0.0;
  for (const auto& s : noisy) {
    double res = static_cast<double>(s.best_threshold) -
                 (f.a * static_cast<double>(s.initial_syndrome_weight) + f.b);
    sum_res += res;
    sum_xres += static_cast<double>(s.initial_syndrome_weight) * res;
  }
  CHECK(std::abs(sum_res) < 1e-9);
  CHECK(std::abs(sum_xres) < 1e-7);
}

TEST_CASE("least_squares_fit degenerate inputs") {
  std::vector<CalibrationSample> one = {{10, 5}};
  CHECK_THROWS_AS(bikebf::least_squares_fit(one), bikebf::DegenerateFitError);
  std::vector<CalibrationSample> flat = {{10, 5}, {10, 7}, {10, 9}};
  CHECK_THROWS_AS(bikebf::least_squares_fit(flat), bikebf::DegenerateFitError);
  CHECK_THROWS_AS(bikebf::least_squares_fit(std::vector<CalibrationSample>{}),
                  bikebf::DegenerateFitError);
}

TEST_CASE("calibrate is deterministic and worker-count independent") {
  CodeParams params{0, 10, 4, 128, 1, 7};  // r comes from r_prime
  auto run1 = bikebf::calibrate(29, params, 120, 999, 8, 1, 5, 1);
  auto run3 = bikebf::calibrate(29, params, 120, 999, 8, 1, 5, 3);
  CHECK(run1.samples == run3.samples);
  CHECK(run1.fit.a == run3.fit.a);
  CHECK(run1.fit.b == run3.fit.b);
  CHECK(run1.fit.r_prime == 29);
  CHECK(run1.fit.num_samples == 120);
  REQUIRE(run1.samples.size() == 120);

  // The stored fit is exactly the least-squares fit of the stored samples.
  auto refit = bikebf::least_squares_fit(run1.samples);
  CHECK(run1.fit.a == refit.a);
  CHECK(run1.fit.b == refit.b);

  for (const CalibrationSample& s : run1.samples) {
    CHECK(s.initial_syndrome_weight <= 29);
    CHECK(s.best_threshold >= 1);
    CHECK(s.best_threshold <= 5);
  }

  // A different master seed moves the samples.
  auto other = bikebf::calibrate(29, params, 120, 1000, 8, 1, 5, 2);
  CHECK_FALSE(run1.samples == other.samples);
}

TEST_CASE("calibrate argument checks") {
  CodeParams params{0, 10, 4, 128, 1, 7};
  CHECK_THROWS_AS(bikebf::calibrate(29, params, 99, 1, 8, 1, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(bikebf::calibrate(4, params, 120, 1, 8, 1, 5, 1),
                  std::invalid_argument);  // d = 5 not < r' = 4
}
