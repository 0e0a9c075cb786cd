#include "bikebf/gf2.hpp"

#include <algorithm>
#include <stdexcept>

#include "bikebf/errors.hpp"

namespace bikebf {

namespace {

// GF(2)[x] polynomial as packed coefficient words, bit i = coefficient of x^i.
struct Gf2Poly {
  std::vector<std::uint64_t> words;

  explicit Gf2Poly(std::size_t max_degree) : words(max_degree / 64 + 1, 0) {}

  void set(std::uint32_t i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }

  int degree() const {
    for (std::size_t wi = words.size(); wi-- > 0;) {
      if (words[wi] != 0)
        return static_cast<int>(wi * 64 + 63 - std::countl_zero(words[wi]));
    }
    return -1;  // zero polynomial
  }

  bool is_one() const {
    if (words[0] != 1) return false;
    for (std::size_t i = 1; i < words.size(); ++i)
      if (words[i] != 0) return false;
    return true;
  }

  bool is_zero() const { return degree() < 0; }

  // *this ^= other << shift
  void xor_shifted(const Gf2Poly& other, std::uint32_t shift) {
    std::size_t word_shift = shift >> 6;
    unsigned bit_shift = shift & 63;
    for (std::size_t i = other.words.size(); i-- > 0;) {
      std::uint64_t w = other.words[i];
      if (w == 0) continue;
      words[i + word_shift] ^= w << bit_shift;
      if (bit_shift != 0 && i + word_shift + 1 < words.size())
        words[i + word_shift + 1] ^= w >> (64 - bit_shift);
    }
  }
};

// a mod b, b nonzero.
Gf2Poly poly_mod(Gf2Poly a, const Gf2Poly& b) {
  int db = b.degree();
  for (int da = a.degree(); da >= db; da = a.degree())
    a.xor_shifted(b, static_cast<std::uint32_t>(da - db));
  return a;
}

std::vector<std::uint32_t> sample_distinct(std::uint32_t range, std::uint32_t count,
                                           StreamRng& rng) {
  std::vector<bool> taken(range, false);
  std::vector<std::uint32_t> out;
  out.reserve(count);
  while (out.size() < count) {
    auto idx = static_cast<std::uint32_t>(rng.uniform_below(range));
    if (taken[idx]) continue;
    taken[idx] = true;
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void CodeParams::validate() const {
  if (r < 2) throw std::invalid_argument("r must be at least 2");
  if (w < 2 || w % 2 != 0) throw std::invalid_argument("w must be a positive even integer");
  if (w / 2 >= r) throw std::invalid_argument("d = w/2 must be less than r");
  if (t > 2 * r) throw std::invalid_argument("t must not exceed 2r");
  if (delta < 1) throw std::invalid_argument("delta must be a positive integer");
  if (imax < 1) throw std::invalid_argument("imax must be at least 1");
  if (security_lambda < 1) throw std::invalid_argument("security level must be positive");
}

SparseKey::SparseKey(std::uint32_t r, std::vector<std::uint32_t> h0,
                     std::vector<std::uint32_t> h1)
    : r_(r), h0_(std::move(h0)), h1_(std::move(h1)) {
  if (r_ == 0) throw std::invalid_argument("r must be positive");
  if (h0_.empty() || h0_.size() != h1_.size())
    throw std::invalid_argument("h0 and h1 must be nonempty and equally sized");
  for (auto* half : {&h0_, &h1_}) {
    std::sort(half->begin(), half->end());
    if (std::adjacent_find(half->begin(), half->end()) != half->end())
      throw std::invalid_argument("key support has duplicate indices");
    if (half->back() >= r_) throw std::invalid_argument("key support index out of range");
  }
}

bool is_invertible(std::span<const std::uint32_t> support, std::uint32_t r) {
  if (support.empty()) throw std::invalid_argument("empty support");
  Gf2Poly h(r);
  for (std::uint32_t i : support) {
    if (i >= r) throw std::invalid_argument("support index out of range");
    h.set(i);
  }
  Gf2Poly modulus(r);  // x^r - 1 = x^r + 1 over GF(2)
  modulus.set(r);
  modulus.set(0);
  // gcd(h, x^r + 1) by the Euclidean algorithm.
  Gf2Poly a = modulus;
  Gf2Poly b = h;
  while (!b.is_zero()) {
    Gf2Poly rem = poly_mod(a, b);
    a = b;
    b = rem;
  }
  return a.is_one();
}

KeygenResult keygen(std::uint32_t r, std::uint32_t d, StreamRng& rng,
                    std::uint32_t max_resamples) {
  if (d == 0 || d >= r) throw std::invalid_argument("keygen requires 0 < d < r");
  std::uint32_t resamples = 0;
  std::vector<std::uint32_t> h0;
  for (;;) {
    h0 = sample_distinct(r, d, rng);
    if (is_invertible(h0, r)) break;
    if (++resamples > max_resamples)
      throw KeygenRetryLimitError("no invertible h0 found within the resample budget");
  }
  std::vector<std::uint32_t> h1 = sample_distinct(r, d, rng);
  return KeygenResult{SparseKey(r, std::move(h0), std::move(h1)), resamples};
}

BitVector sample_error(std::uint32_t r, std::uint32_t t, StreamRng& rng) {
  if (t > 2 * r) throw std::invalid_argument("error weight exceeds vector length");
  BitVector e(2 * std::size_t{r});
  std::uint32_t placed = 0;
  while (placed < t) {
    auto idx = static_cast<std::size_t>(rng.uniform_below(2 * std::uint64_t{r}));
    if (e.get(idx)) continue;
    e.set(idx);
    ++placed;
  }
  return e;
}

BitVector syndrome(const SparseKey& key, const BitVector& e) {
  const std::uint32_t r = key.r();
  if (e.size() != 2 * std::size_t{r})
    throw std::invalid_argument("error vector length must be 2r");
  BitVector s(r);
  for (std::uint32_t j : e.indices()) xor_column(key, j, s);
  return s;
}

std::vector<std::uint32_t> column_support(const SparseKey& key, std::uint32_t j) {
  const std::uint32_t r = key.r();
  if (j >= 2 * r) throw std::out_of_range("column index out of range");
  const auto& supp = key.support(j < r ? 0 : 1);
  const std::uint32_t jr = j < r ? j : j - r;
  std::vector<std::uint32_t> rows;
  rows.reserve(supp.size());
  for (std::uint32_t k : supp) rows.push_back((jr + r - k) % r);
  return rows;
}

BitVector column(const SparseKey& key, std::uint32_t j) {
  BitVector col(key.r());
  for (std::uint32_t i : column_support(key, j)) col.set(i);
  return col;
}

void xor_column(const SparseKey& key, std::uint32_t j, BitVector& s) {
  const std::uint32_t r = key.r();
  const auto& supp = key.support(j < r ? 0 : 1);
  const std::uint32_t jr = j < r ? j : j - r;
  for (std::uint32_t k : supp) s.flip((jr + r - k) % r);
}

}  // namespace bikebf
