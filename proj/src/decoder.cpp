#include "bikebf/decoder.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace bikebf {

namespace {

// len bits of s read circularly from `pos`: bit c of the result is
// s[(pos + c) mod r].
std::uint64_t circular_window(const BitVector& s, std::size_t pos, unsigned len) {
  std::size_t r = s.size();
  if (pos + len <= r) return extract_bits(s, pos, len);
  unsigned head = static_cast<unsigned>(r - pos);
  return extract_bits(s, pos, head) | (extract_bits(s, 0, len - head) << head);
}

std::uint64_t clamped_weight(std::int64_t tracked, std::uint32_t r) {
  return static_cast<std::uint64_t>(std::clamp<std::int64_t>(tracked, 0, r));
}

}  // namespace

std::uint32_t count_upc(const SparseKey& key, const BitVector& s, std::size_t column) {
  std::uint32_t acc = 0;
  for (std::uint32_t i : column_support(key, static_cast<std::uint32_t>(column)))
    acc += s.get(i);
  return acc;
}

void count_block(const SparseKey& key, const BitVector& s, std::size_t first_column,
                 std::size_t len, std::uint16_t* sigma_out) {
  const std::uint32_t r = key.r();
  if (len < 1 || len > 64) throw std::invalid_argument("count_block: len must be 1..64");
  if (first_column + len > 2 * static_cast<std::size_t>(r))
    throw std::out_of_range("count_block: column range outside H");
  const unsigned half = first_column < r ? 0 : 1;
  const std::size_t j0 = first_column - static_cast<std::size_t>(half) * r;
  if (j0 + len > r)
    throw std::invalid_argument("count_block: range crosses the circulant boundary");
  if (len > r) throw std::invalid_argument("count_block: len exceeds r");

  std::fill(sigma_out, sigma_out + len, std::uint16_t{0});
  const unsigned wlen = static_cast<unsigned>(len);
  for (std::uint32_t k : key.support(half)) {
    std::size_t pos = j0 >= k ? j0 - k : j0 + r - k;  // (j0 - k) mod r
    std::uint64_t w = circular_window(s, pos, wlen);
    while (w != 0) {
      sigma_out[std::countr_zero(w)]++;
      w &= w - 1;
    }
  }
}

std::uint64_t run_iteration(const SparseKey& key, const Rational& threshold,
                            std::size_t block_size, BitVector& s, BitVector& e,
                            std::int64_t& tracked_weight, unsigned iteration,
                            const DecodeHooks* hooks,
                            std::vector<std::uint32_t>& flip_scratch) {
  const std::uint32_t r = key.r();
  const std::size_t n = 2 * static_cast<std::size_t>(r);
  const std::size_t block = block_size == 0 ? n : std::min(block_size, n);
  const std::int64_t flip_at = threshold.ceil();  // sigma >= T  <=>  sigma >= ceil(T)
  const std::int64_t d = key.d();

  std::vector<std::uint16_t> sigma(block);
  std::uint64_t flips_total = 0;
  for (std::size_t b0 = 0; b0 < n; b0 += block) {
    const std::size_t b1 = std::min(b0 + block, n);
    // Pass 1: count every column of the block against the block-start s.
    std::size_t c = b0;
    while (c < b1) {
      const std::size_t half_end = c < r ? r : n;
      const std::size_t len = std::min({b1 - c, half_end - c, std::size_t{64}});
      count_block(key, s, c, len, sigma.data() + (c - b0));
      c += len;
    }
    // Pass 2: apply the block's flips.
    flip_scratch.clear();
    for (std::size_t j = b0; j < b1; ++j) {
      const std::int64_t sj = sigma[j - b0];
      if (sj >= flip_at) {
        e.flip(j);
        xor_column(key, static_cast<std::uint32_t>(j), s);
        tracked_weight += d - 2 * sj;
        flip_scratch.push_back(static_cast<std::uint32_t>(j));
      }
    }
    flips_total += flip_scratch.size();
    if (hooks != nullptr && hooks->on_block)
      hooks->on_block(BlockEvent{iteration, b0, b1, flip_scratch, s, e, tracked_weight});
  }
  return flips_total;
}

DecodeOutcome decode(const SparseKey& key, const BitVector& s0, const DecoderConfig& cfg,
                     const DecodeHooks* hooks) {
  cfg.params.validate();
  if (key.r() != cfg.params.r || key.d() != cfg.params.d())
    throw std::invalid_argument("decode: key does not match the code parameters");
  if (s0.size() != cfg.params.r)
    throw std::invalid_argument("decode: syndrome length != r");

  const std::uint32_t r = cfg.params.r;
  BitVector s = s0;
  BitVector e(2 * static_cast<std::size_t>(r));
  const std::uint64_t w0 = s.popcount();
  const ThresholdState state =
      make_threshold_state(cfg.coeffs, w0, cfg.params.d(), cfg.params.delta);
  std::int64_t tracked = static_cast<std::int64_t>(w0);

  DecodeOutcome out;
  out.flips_per_iteration.reserve(cfg.params.imax);
  std::vector<std::uint32_t> scratch;
  for (unsigned i = 1; i <= cfg.params.imax; ++i) {
    const std::uint64_t weight_before = (cfg.track_weight_incrementally && i > 1)
                                            ? clamped_weight(tracked, r)
                                            : s.popcount();
    const Rational T =
        threshold_for_iteration(i, weight_before, state, cfg.coeffs, cfg.trunc_thirds_bits);
    const std::uint64_t flips =
        run_iteration(key, T, cfg.block_size, s, e, tracked, i, hooks, scratch);
    out.flips_per_iteration.push_back(flips);
    if (hooks != nullptr && hooks->on_iteration) {
      const std::uint64_t weight_after =
          cfg.track_weight_incrementally ? clamped_weight(tracked, r) : s.popcount();
      hooks->on_iteration(IterationEvent{i, T, weight_before, flips, weight_after});
    }
  }
  out.iterations_run = cfg.params.imax;
  out.converged = s.is_zero();
  out.final_syndrome_weight = s.popcount();
  out.error_estimate = std::move(e);
  return out;
}

TrialResult decode_and_check(const SparseKey& key, const BitVector& e_true,
                             const DecoderConfig& cfg, const DecodeHooks* hooks) {
  TrialResult res;
  res.outcome = decode(key, syndrome(key, e_true), cfg, hooks);
  res.failure = !(res.outcome.error_estimate == e_true);
  return res;
}

}  // namespace bikebf
