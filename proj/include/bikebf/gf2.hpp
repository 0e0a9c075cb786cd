#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bikebf/bitvec.hpp"
#include "bikebf/rng.hpp"

namespace bikebf {

// Code parameters for one (r, w, t) QC-MDPC instance.
//
// The standard sets are (w, t) = (142, 134), (206, 199), (274, 264) for
// security levels 128, 192, 256; arbitrary small values are accepted for
// desk-scale experiments.
struct CodeParams {
  std::uint32_t r = 0;
  std::uint32_t w = 0;   // row weight; d = w/2 per circulant block
  std::uint32_t t = 0;   // error weight
  std::uint32_t security_lambda = 128;
  std::uint32_t delta = 3;  // threshold schedule offset
  std::uint32_t imax = 7;   // fixed iteration count

  std::uint32_t d() const { return w / 2; }
  void validate() const;  // throws std::invalid_argument
};

// Private key of the quasi-cyclic code: the supports of h0 and h1, the first
// rows of the two circulant blocks of H = [H0 | H1]. Row i of H0 is h0
// cyclically shifted by i, i.e. H0[i][j] = 1 iff (j - i) mod r is in the h0
// support; H1 is laid out the same way on columns r..2r-1. Every other module
// inherits this single convention.
class SparseKey {
 public:
  SparseKey(std::uint32_t r, std::vector<std::uint32_t> h0, std::vector<std::uint32_t> h1);

  std::uint32_t r() const { return r_; }
  std::uint32_t d() const { return static_cast<std::uint32_t>(h0_.size()); }
  const std::vector<std::uint32_t>& h0() const { return h0_; }
  const std::vector<std::uint32_t>& h1() const { return h1_; }
  const std::vector<std::uint32_t>& support(unsigned half) const { return half == 0 ? h0_ : h1_; }

  bool operator==(const SparseKey& o) const = default;

 private:
  std::uint32_t r_;
  std::vector<std::uint32_t> h0_;  // sorted, distinct, < r
  std::vector<std::uint32_t> h1_;
};

// True iff the polynomial with the given support is invertible mod x^r - 1
// over GF(2), i.e. gcd(h(x), x^r - 1) = 1 (polynomial Euclidean algorithm).
bool is_invertible(std::span<const std::uint32_t> support, std::uint32_t r);

struct KeygenResult {
  SparseKey key;
  std::uint32_t resamples;  // number of h0 rejections before success
};

// Samples h0 until invertible (resampling cap keeps the worst case
// terminating), then h1 with the same weight and no further constraint.
KeygenResult keygen(std::uint32_t r, std::uint32_t d, StreamRng& rng,
                    std::uint32_t max_resamples = 1000);

// Uniform weight-t vector over [0, 2r), sampled by rejection over distinct
// uniform indices.
BitVector sample_error(std::uint32_t r, std::uint32_t t, StreamRng& rng);

// s = H e^T with the row-shift convention above; s_i = XOR_j H[i][j] e_j.
BitVector syndrome(const SparseKey& key, const BitVector& e);

// Support of column j of H: {(j' - k) mod r : k in half support}, j' = j mod r.
std::vector<std::uint32_t> column_support(const SparseKey& key, std::uint32_t j);

// Column j as a dense r-bit vector.
BitVector column(const SparseKey& key, std::uint32_t j);

// XOR column j of H into s in place (the decoder's syndrome update).
void xor_column(const SparseKey& key, std::uint32_t j, BitVector& s);

}  // namespace bikebf
