#pragma once

#include <cstdint>
#include <string>

#include "bikebf/rational.hpp"

namespace bikebf {

// Coefficients of the flip-threshold function f(x) = a*x + b, where x is the
// current syndrome weight. precision_bits == 0 means full precision;
// precision_bits == k means a carries its k most significant nonzero
// fractional bits (MSNBs) and b its k most significant fractional bits, both
// by pure truncation.
struct ThresholdCoefficients {
  Rational a;
  Rational b;
  unsigned precision_bits = 0;

  static ThresholdCoefficients from_decimal(std::string_view a_text, std::string_view b_text);

  bool operator==(const ThresholdCoefficients& o) const = default;
};

// Truncates full-precision coefficients to the k-bit forms described above.
// The integer parts are preserved exactly; a == 0 stays 0 (no nonzero bit to
// anchor the MSNB window). Truncation never rounds up, so the quantized
// values are <= the full-precision values, and the map is idempotent.
ThresholdCoefficients quantize(const ThresholdCoefficients& full, unsigned k);

// f(x) = a*x + b evaluated exactly with the coefficients as stored.
Rational eval_threshold_fn(const ThresholdCoefficients& coeffs, std::uint64_t syndrome_weight);

// Position (1-based) of the first nonzero fractional bit of v, or 0 when the
// fractional part is zero.
unsigned first_fractional_one(const Rational& v);

// Per-decode threshold schedule state: T' is f evaluated once on the initial
// syndrome weight and never recomputed; M = (d+1)/2 is the majority level.
struct ThresholdState {
  Rational initial_threshold;  // T'
  std::uint32_t majority;      // M
  std::uint32_t delta;
};

ThresholdState make_threshold_state(const ThresholdCoefficients& coeffs,
                                    std::uint64_t initial_syndrome_weight, std::uint32_t d,
                                    std::uint32_t delta);

// Iteration threshold:
//   base = T'+delta            (i == 1)
//          (2T'+M)/3 + delta   (i == 2)
//          (T'+2M)/3 + delta   (i == 3)
//          M+delta             (i >= 4)
//   T = max(f(|s|), base)
// The divisions by 3 are exact rationals by default; trunc_thirds_bits >= 0
// truncates each quotient to that many fractional bits before adding delta,
// for fixed-point hardware matching experiments.
Rational threshold_for_iteration(unsigned iteration, std::uint64_t syndrome_weight,
                                 const ThresholdState& state,
                                 const ThresholdCoefficients& coeffs,
                                 int trunc_thirds_bits = -1);

// Binary expansion "1010.1101100" of a nonnegative value. window_frac_bits > 0
// renders exactly that many fractional bits (the value must be a multiple of
// 2^-window); window_frac_bits == 0 renders up to max_frac_bits and appends
// "..." when the expansion continues.
std::string binary_expansion(const Rational& v, unsigned window_frac_bits = 0,
                             unsigned max_frac_bits = 20);

// One coefficient row of a quantization report: the binary expansion and the
// exact decimal value.
struct CoefficientForm {
  std::string binary;
  std::string decimal;
};

struct QuantizeReport {
  CoefficientForm a;
  CoefficientForm b;
};

// Rendering of both coefficients at their declared precision. For quantized
// coefficients the binary field width is implied by the mode: first nonzero
// fractional bit + k - 1 for a, k for b.
QuantizeReport describe_coefficients(const ThresholdCoefficients& coeffs);

}  // namespace bikebf
