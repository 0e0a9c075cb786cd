#include "bikebf/dfr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/beta.hpp>

#include "bikebf/errors.hpp"
#include "bikebf/rng.hpp"

namespace bikebf {

std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("clopper_pearson: zero trials");
  if (failures > trials) throw std::invalid_argument("clopper_pearson: failures > trials");
  const double k = static_cast<double>(failures);
  const double n = static_cast<double>(trials);
  double lo = 0.0;
  double hi = 1.0;
  if (failures > 0)
    lo = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1), 0.025);
  if (failures < trials)
    hi = boost::math::quantile(boost::math::beta_distribution<double>(k + 1, n - k), 0.975);
  return {lo, hi};
}

DfrEstimate estimate_dfr(const DecoderConfig& cfg, std::uint64_t trials,
                         std::uint64_t master_seed, unsigned workers,
                         std::uint64_t first_trial) {
  if (trials < 1) throw std::invalid_argument("estimate_dfr: need at least one trial");
  cfg.params.validate();
  if (workers == 0) workers = 1;

  std::atomic<std::uint64_t> next{first_trial};
  const std::uint64_t end = first_trial + trials;
  std::atomic<std::uint64_t> failures{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker_fn = [&]() {
    try {
      std::uint64_t local = 0;
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= end || failed.load()) break;
        StreamRng rng(master_seed, i);
        KeygenResult kg = keygen(cfg.params.r, cfg.params.d(), rng);
        BitVector e = sample_error(cfg.params.r, cfg.params.t, rng);
        if (decode_and_check(kg.key, e, cfg).failure) ++local;
      }
      failures.fetch_add(local);
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

  DfrEstimate est;
  est.r = cfg.params.r;
  est.trials = trials;
  est.failures = failures.load();
  est.dfr_point = static_cast<double>(est.failures) / static_cast<double>(trials);
  std::tie(est.ci_low, est.ci_high) = clopper_pearson(est.failures, trials);
  return est;
}

Extrapolation extrapolate(std::span<const std::pair<double, double>> points,
                          std::uint32_t lambda, bool fit_all) {
  std::vector<std::pair<double, double>> usable;  // (r, log2 dfr)
  for (const auto& [r, dfr] : points) {
    if (dfr > 0.0) usable.emplace_back(r, std::log2(dfr));
  }
  if (usable.size() < 2)
    throw NoExtrapolationError("extrapolate: need at least 2 points with nonzero dfr");

  Extrapolation ex;
  ex.lambda = lambda;
  if (fit_all) {
    double mean_r = 0.0;
    double mean_l = 0.0;
    for (const auto& [r, l] : usable) {
      mean_r += r;
      mean_l += l;
    }
    mean_r /= static_cast<double>(usable.size());
    mean_l /= static_cast<double>(usable.size());
    double srr = 0.0;
    double srl = 0.0;
    for (const auto& [r, l] : usable) {
      srr += (r - mean_r) * (r - mean_r);
      srl += (r - mean_r) * (l - mean_l);
    }
    if (srr == 0.0) throw NoExtrapolationError("extrapolate: all points share one r");
    ex.slope = srl / srr;
    ex.intercept = mean_l - ex.slope * mean_r;
  } else {
    // The two lowest-dfr points; stable order so ties are deterministic.
    std::stable_sort(usable.begin(), usable.end(),
                     [](const auto& p, const auto& q) { return p.second < q.second; });
    const auto& [r1, l1] = usable[0];
    const auto& [r2, l2] = usable[1];
    if (r1 == r2)
      throw NoExtrapolationError("extrapolate: the two lowest-dfr points share one r");
    ex.slope = (l2 - l1) / (r2 - r1);
    ex.intercept = l1 - ex.slope * r1;
  }
  if (!(ex.slope < 0.0))
    throw NoExtrapolationError("extrapolate: slope is not negative, dfr is not decreasing");
  ex.r_star = (-static_cast<double>(lambda) - ex.intercept) / ex.slope;
  return ex;
}

SweepResult sweep(const DecoderConfig& cfg, std::span<const std::uint32_t> r_list,
                  std::uint64_t trials_per_r, std::uint64_t master_seed, unsigned workers,
                  bool fit_all) {
  if (r_list.empty()) throw std::invalid_argument("sweep: empty r list");
  for (std::size_t i = 1; i < r_list.size(); ++i)
    if (r_list[i] <= r_list[i - 1])
      throw std::invalid_argument("sweep: r values must be strictly ascending");

  SweepResult result;
  result.estimates.reserve(r_list.size());
  for (std::uint32_t r : r_list) {
    DecoderConfig per_r = cfg;
    per_r.params.r = r;
    result.estimates.push_back(
        estimate_dfr(per_r, trials_per_r, mix64(master_seed ^ r), workers));
  }

  std::vector<std::pair<double, double>> points;
  for (const DfrEstimate& est : result.estimates)
    if (est.failures > 0) points.emplace_back(static_cast<double>(est.r), est.dfr_point);
  if (points.size() < 2) {
    result.warning = "extrapolation omitted: fewer than 2 r values with nonzero failures";
    return result;
  }
  try {
    result.extrapolation = extrapolate(points, cfg.params.security_lambda, fit_all);
  } catch (const NoExtrapolationError& err) {
    result.warning = std::string("extrapolation omitted: ") + err.what();
  }
  return result;
}

}  // namespace bikebf
