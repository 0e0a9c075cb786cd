#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bikebf {

// Exact rational arithmetic on int64 numerator / positive int64 denominator,
// kept in lowest terms. Intermediate products run through __int128 so that
// threshold comparisons never round. Coefficients parsed from decimal strings
// and truncated dyadics stay exact end to end; a value that cannot be reduced
// back into int64 throws std::overflow_error (unreachable for in-domain
// parameter sizes).
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d);

  // Parses "12", "-0.5", "10.8504". Rejects exponents and stray characters.
  static Rational from_decimal(std::string_view text);
  // n / 2^bits
  static Rational dyadic(std::int64_t n, unsigned bits);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator<(const Rational& o) const;
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  std::int64_t floor() const;
  std::int64_t ceil() const;

  // Largest multiple of 2^-bits that is <= *this. For nonnegative values this
  // is pure truncation of the binary expansion after `bits` fractional bits.
  Rational floor_to_dyadic(unsigned bits) const;

  Rational frac() const;  // *this - floor(*this), in [0, 1)

  double to_double() const;

  // True when the denominator is of the form 2^a * 5^b, i.e. the value has a
  // terminating decimal expansion.
  bool has_terminating_decimal() const;
  // Exact decimal string with the minimal number of fractional digits.
  // Requires has_terminating_decimal().
  std::string to_decimal_string() const;
  // "num/den", or just "num" for integers.
  std::string to_fraction_string() const;
  // Decimal when terminating, fraction otherwise. Always exact.
  std::string to_exact_string() const;

 private:
  void normalize();

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace bikebf
