#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace bikebf {

// Dense GF(2) vector packed into 64-bit words. Bits past `size()` in the last
// word are kept zero so that word-level equality and popcount are valid.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length)
      : len_(length), words_((length + 63) / 64, 0) {}

  static BitVector from_indices(std::size_t length, std::span<const std::uint32_t> indices) {
    BitVector v(length);
    for (std::uint32_t i : indices) {
      if (i >= length) throw std::out_of_range("bit index out of range");
      v.set(i);
    }
    return v;
  }

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void clear() { words_.assign(words_.size(), 0); }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool is_zero() const {
    for (std::uint64_t w : words_)
      if (w != 0) return false;
    return true;
  }

  BitVector& operator^=(const BitVector& o) {
    if (o.len_ != len_) throw std::invalid_argument("xor of bit vectors with different lengths");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool operator==(const BitVector& o) const = default;

  std::vector<std::uint32_t> indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(popcount());
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        unsigned bit = static_cast<unsigned>(std::countr_zero(w));
        out.push_back(static_cast<std::uint32_t>(wi * 64 + bit));
        w &= w - 1;
      }
    }
    return out;
  }

  const std::uint64_t* words() const { return words_.data(); }
  std::size_t word_count() const { return words_.size(); }

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

// Reads `len` bits (1..64) starting at bit `pos`; requires pos + len <= v.size().
// Bit c of the result is v[pos + c].
inline std::uint64_t extract_bits(const BitVector& v, std::size_t pos, unsigned len) {
  const std::uint64_t* w = v.words();
  std::size_t wi = pos >> 6;
  unsigned off = static_cast<unsigned>(pos & 63);
  std::uint64_t chunk = w[wi] >> off;
  if (off != 0 && wi + 1 < v.word_count()) chunk |= w[wi + 1] << (64 - off);
  if (len < 64) chunk &= (std::uint64_t{1} << len) - 1;
  return chunk;
}

}  // namespace bikebf
