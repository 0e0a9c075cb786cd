#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bikebf/bitvec.hpp"
#include "bikebf/gf2.hpp"
#include "bikebf/rational.hpp"
#include "bikebf/threshold.hpp"

namespace bikebf {

// Bit-flipping decoder configuration. block_size B selects the schedule on a
// single axis: B = 2r (or 0, meaning "one block") counts every column against
// the iteration-start syndrome before any flip lands; B = 1 is fully
// column-layered (each count sees all earlier flips); intermediate values
// interpolate, with B = 32 matching a 32-column hardware datapath.
//
// track_weight_incrementally selects where the syndrome weight fed to the
// threshold function comes from on iterations after the first: false
// recomputes the true weight, true maintains a running value updated by
// d - 2*sigma_j per flip, as a hardware accumulator would. The running value
// is exact for B = 1 and may drift within a block for B > 1 (sigma is counted
// at block start); it only ever feeds the threshold, never the convergence
// check, and is clamped to [0, r] first.
struct DecoderConfig {
  CodeParams params;
  ThresholdCoefficients coeffs;
  std::size_t block_size = 32;
  bool track_weight_incrementally = false;
  int trunc_thirds_bits = -1;  // see threshold_for_iteration
};

// Fired once per iteration, after its flips are applied. The weights are the
// ones the threshold logic consumes (true weights, or tracked values when
// track_weight_incrementally is set).
struct IterationEvent {
  unsigned iteration;  // 1-based
  Rational threshold;
  std::uint64_t weight_before;
  std::uint64_t flips;
  std::uint64_t weight_after;
};

// Fired once per block, after the block's flips are applied. The references
// point at the decoder's live state and are only valid during the callback.
struct BlockEvent {
  unsigned iteration;
  std::size_t begin;  // column range [begin, end)
  std::size_t end;
  std::span<const std::uint32_t> flipped;  // columns flipped in this block
  const BitVector& syndrome;
  const BitVector& error_estimate;
  std::int64_t tracked_weight;  // running d - 2*sigma accumulator (always kept)
};

struct DecodeHooks {
  std::function<void(const BlockEvent&)> on_block;
  std::function<void(const IterationEvent&)> on_iteration;
};

struct DecodeOutcome {
  BitVector error_estimate;
  bool converged = false;  // final syndrome is exactly zero
  unsigned iterations_run = 0;
  std::vector<std::uint64_t> flips_per_iteration;
  std::uint64_t final_syndrome_weight = 0;  // true weight, never the tracked value
};

struct TrialResult {
  DecodeOutcome outcome;
  bool failure = false;  // error_estimate != the planted error
};

// Number of unsatisfied parity checks touching `column`: |col(H, j) AND s|.
// Reference counter; the decoder's hot path uses count_block.
std::uint32_t count_upc(const SparseKey& key, const BitVector& s, std::size_t column);

// Counts for `len` consecutive columns starting at first_column, written to
// sigma_out[0..len). Requires 1 <= len <= 64 and the whole range inside one
// circulant half. Each key index contributes a 64-bit circular window of s,
// scattered into the counters bit by bit.
void count_block(const SparseKey& key, const BitVector& s, std::size_t first_column,
                 std::size_t len, std::uint16_t* sigma_out);

// One decoder iteration at a fixed threshold: for each block, count all its
// columns against the block-start syndrome, then flip every column with
// sigma >= threshold (sigma is integral, so the test is sigma >= ceil(T)).
// Updates s, e and tracked_weight in place; returns the number of flips.
// flip_scratch is reused storage for per-block flip lists.
std::uint64_t run_iteration(const SparseKey& key, const Rational& threshold,
                            std::size_t block_size, BitVector& s, BitVector& e,
                            std::int64_t& tracked_weight, unsigned iteration,
                            const DecodeHooks* hooks,
                            std::vector<std::uint32_t>& flip_scratch);

// Full decode of syndrome s0: always runs params.imax iterations; per
// iteration the threshold is max(f(weight), schedule base) with f evaluated on
// the iteration-start weight. Convergence means the true final syndrome is
// zero. s0 must have length r.
DecodeOutcome decode(const SparseKey& key, const BitVector& s0, const DecoderConfig& cfg,
                     const DecodeHooks* hooks = nullptr);

// Computes the syndrome of a planted error, decodes it, and compares. A trial
// fails when the estimate differs from the planted error in any position
// (matching syndromes alone do not count).
TrialResult decode_and_check(const SparseKey& key, const BitVector& e_true,
                             const DecoderConfig& cfg, const DecodeHooks* hooks = nullptr);

}  // namespace bikebf
