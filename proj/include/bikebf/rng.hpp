#pragma once

#include <cstdint>
#include <stdexcept>

namespace bikebf {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Counter-based deterministic generator: output c is
//   mix64(k + c * GAMMA),  k = mix64(mix64(master_seed + GAMMA) ^ stream)
// which is SplitMix64 whose start state is derived from (master_seed, stream).
// A trial is fully determined by its (master_seed, stream) pair, so results
// are independent of worker count and scheduling. The bounded sampler uses
// fixed rejection below the largest multiple of n; nothing here depends on
// implementation-defined standard library distributions.
class StreamRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  StreamRng(std::uint64_t master_seed, std::uint64_t stream)
      : key_(mix64(mix64(master_seed + kGamma) ^ stream)) {}

  std::uint64_t next() {
    counter_ += kGamma;
    return mix64(key_ + counter_);
  }

  // Uniform in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below(0)");
    std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  // std::uniform_random_bit_generator interface (not used for anything that
  // must be reproducible across standard libraries).
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bikebf
