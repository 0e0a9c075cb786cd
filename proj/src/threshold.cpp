#include "bikebf/threshold.hpp"

#include <stdexcept>

namespace bikebf {

ThresholdCoefficients ThresholdCoefficients::from_decimal(std::string_view a_text,
                                                          std::string_view b_text) {
  ThresholdCoefficients c;
  c.a = Rational::from_decimal(a_text);
  c.b = Rational::from_decimal(b_text);
  if (c.a < Rational(0) || c.b < Rational(0))
    throw std::invalid_argument("threshold coefficients must be nonnegative");
  return c;
}

unsigned first_fractional_one(const Rational& v) {
  Rational f = v.frac();
  if (f.is_zero()) return 0;
  unsigned pos = 0;
  while (true) {
    ++pos;
    if (pos > 200) throw std::overflow_error("fractional leading bit beyond scan depth");
    f = f * Rational(2);
    if (f >= Rational(1)) return pos;
  }
}

ThresholdCoefficients quantize(const ThresholdCoefficients& full, unsigned k) {
  if (k < 1) throw std::invalid_argument("precision must be at least 1 bit");
  ThresholdCoefficients q;
  unsigned a_lead = first_fractional_one(full.a);
  q.a = a_lead == 0 ? full.a : full.a.floor_to_dyadic(a_lead + k - 1);
  q.b = full.b.floor_to_dyadic(k);
  q.precision_bits = k;
  return q;
}

Rational eval_threshold_fn(const ThresholdCoefficients& coeffs, std::uint64_t syndrome_weight) {
  return coeffs.a * Rational(static_cast<std::int64_t>(syndrome_weight)) + coeffs.b;
}

ThresholdState make_threshold_state(const ThresholdCoefficients& coeffs,
                                    std::uint64_t initial_syndrome_weight, std::uint32_t d,
                                    std::uint32_t delta) {
  return ThresholdState{eval_threshold_fn(coeffs, initial_syndrome_weight), (d + 1) / 2,
                        delta};
}

Rational threshold_for_iteration(unsigned iteration, std::uint64_t syndrome_weight,
                                 const ThresholdState& state,
                                 const ThresholdCoefficients& coeffs,
                                 int trunc_thirds_bits) {
  if (iteration < 1) throw std::invalid_argument("iterations are 1-based");
  const Rational t_prime = state.initial_threshold;
  const Rational m(static_cast<std::int64_t>(state.majority));
  const Rational delta(static_cast<std::int64_t>(state.delta));
  auto third = [&](const Rational& v) {
    Rational q = v / Rational(3);
    if (trunc_thirds_bits >= 0) q = q.floor_to_dyadic(static_cast<unsigned>(trunc_thirds_bits));
    return q;
  };
  Rational base;
  switch (iteration) {
    case 1:
      base = t_prime + delta;
      break;
    case 2:
      base = third(Rational(2) * t_prime + m) + delta;
      break;
    case 3:
      base = third(t_prime + Rational(2) * m) + delta;
      break;
    default:
      base = m + delta;
      break;
  }
  return max(eval_threshold_fn(coeffs, syndrome_weight), base);
}

std::string binary_expansion(const Rational& v, unsigned window_frac_bits,
                             unsigned max_frac_bits) {
  if (v < Rational(0)) throw std::invalid_argument("binary expansion of negative value");
  std::int64_t int_part = v.floor();
  std::string out;
  if (int_part == 0) {
    out = "0";
  } else {
    while (int_part > 0) {
      out.insert(out.begin(), static_cast<char>('0' + (int_part & 1)));
      int_part >>= 1;
    }
  }
  Rational f = v.frac();
  if (window_frac_bits == 0 && f.is_zero()) return out;
  out.push_back('.');
  unsigned limit = window_frac_bits != 0 ? window_frac_bits : max_frac_bits;
  for (unsigned i = 0; i < limit; ++i) {
    if (window_frac_bits == 0 && f.is_zero()) break;  // free mode: minimal form
    f = f * Rational(2);
    if (f >= Rational(1)) {
      out.push_back('1');
      f = f - Rational(1);
    } else {
      out.push_back('0');
    }
  }
  if (window_frac_bits != 0) {
    if (!f.is_zero())
      throw std::invalid_argument("value does not fit the requested fractional window");
  } else if (!f.is_zero()) {
    out += "...";
  }
  return out;
}

QuantizeReport describe_coefficients(const ThresholdCoefficients& coeffs) {
  QuantizeReport report;
  unsigned a_window = 0;
  unsigned b_window = 0;
  if (coeffs.precision_bits != 0) {
    unsigned lead = first_fractional_one(coeffs.a);
    a_window = lead == 0 ? 0 : lead + coeffs.precision_bits - 1;
    b_window = coeffs.precision_bits;
  }
  report.a.binary = binary_expansion(coeffs.a, a_window);
  report.a.decimal = coeffs.a.to_exact_string();
  report.b.binary = binary_expansion(coeffs.b, b_window);
  report.b.decimal = coeffs.b.to_exact_string();
  return report;
}

}  // namespace bikebf
