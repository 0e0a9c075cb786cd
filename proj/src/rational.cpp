#include "bikebf/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace bikebf {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t checked_i64(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational value out of int64 range");
  }
  return static_cast<std::int64_t>(v);
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 g = gcd_u128(num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num),
                    static_cast<u128>(den));
  if (g > 1) {
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
  }
  return Rational(checked_i64(num), checked_i64(den));
}

i128 floor_div(i128 n, i128 d) {
  // d > 0
  i128 q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

void Rational::normalize() {
  if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
  // Widen before negating so INT64_MIN sign flips stay defined.
  i128 num = num_;
  i128 den = den_;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 g = gcd_u128(num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num),
                    static_cast<u128>(den));
  if (g > 1) {
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
  }
  num_ = checked_i64(num);
  den_ = checked_i64(den);
}

Rational Rational::from_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty decimal string");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string int_digits;
  std::string frac_digits;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
    int_digits.push_back(text[pos++]);
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      frac_digits.push_back(text[pos++]);
  }
  if (pos != text.size() || (int_digits.empty() && frac_digits.empty()))
    throw std::invalid_argument("malformed decimal string: '" + std::string(text) + "'");
  if (frac_digits.size() > 18)
    throw std::invalid_argument("decimal string has more than 18 fractional digits");
  std::size_t first_sig = int_digits.find_first_not_of('0');
  std::size_t int_sig = first_sig == std::string::npos ? 0 : int_digits.size() - first_sig;
  if (int_sig + frac_digits.size() > 18)
    throw std::invalid_argument("decimal string has more than 18 significant digits");

  i128 num = 0;
  for (char c : int_digits) num = num * 10 + (c - '0');
  i128 den = 1;
  for (char c : frac_digits) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  if (negative) num = -num;
  return make_reduced(num, den);
}

Rational Rational::dyadic(std::int64_t n, unsigned bits) {
  if (bits > 62) throw std::invalid_argument("dyadic denominator exponent too large");
  return Rational(n, std::int64_t{1} << bits);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  return make_reduced(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                      static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  return make_reduced(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::invalid_argument("rational division by zero");
  return make_reduced(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<i128>(num_) * o.den_ < static_cast<i128>(o.num_) * den_;
}

std::int64_t Rational::floor() const {
  return checked_i64(floor_div(num_, den_));
}

std::int64_t Rational::ceil() const {
  return checked_i64(-floor_div(-static_cast<i128>(num_), den_));
}

Rational Rational::floor_to_dyadic(unsigned bits) const {
  if (bits > 62) throw std::invalid_argument("dyadic truncation width too large");
  i128 scaled = floor_div(static_cast<i128>(num_) << bits, den_);
  return make_reduced(scaled, i128{1} << bits);
}

Rational Rational::frac() const { return *this - Rational(floor()); }

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

bool Rational::has_terminating_decimal() const {
  std::int64_t d = den_;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

std::string Rational::to_decimal_string() const {
  if (!has_terminating_decimal())
    throw std::domain_error("rational has no terminating decimal expansion");
  std::int64_t d = den_;
  unsigned twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  unsigned digits = twos > fives ? twos : fives;
  // Scale so the denominator becomes 10^digits exactly.
  i128 scaled = static_cast<i128>(num_);
  for (unsigned i = 0; i < digits - twos; ++i) scaled *= 2;
  for (unsigned i = 0; i < digits - fives; ++i) scaled *= 5;
  bool negative = scaled < 0;
  u128 mag = negative ? static_cast<u128>(-scaled) : static_cast<u128>(scaled);
  std::string raw;
  do {
    raw.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  } while (mag != 0);
  while (raw.size() <= digits) raw.push_back('0');
  std::string out;
  if (negative) out.push_back('-');
  for (std::size_t i = raw.size(); i-- > 0;) {
    out.push_back(raw[i]);
    if (digits != 0 && i == digits) out.push_back('.');
  }
  return out;
}

std::string Rational::to_fraction_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_exact_string() const {
  return has_terminating_decimal() ? to_decimal_string() : to_fraction_string();
}

}  // namespace bikebf
