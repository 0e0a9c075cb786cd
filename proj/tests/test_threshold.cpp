#include <stdexcept>

#include "bikebf/rational.hpp"
#include "bikebf/threshold.hpp"
#include "doctest.h"

using bikebf::binary_expansion;
using bikebf::eval_threshold_fn;
using bikebf::first_fractional_one;
using bikebf::Rational;
using bikebf::ThresholdCoefficients;
using bikebf::ThresholdState;

namespace {
const ThresholdCoefficients kHw = ThresholdCoefficients::from_decimal("0.00618658", "10.8504");
const ThresholdCoefficients kFull =
    ThresholdCoefficients::from_decimal("0.006258", "11.094");
}  // namespace

TEST_CASE("from_decimal builds exact coefficients and rejects negatives") {
  CHECK(kHw.a == Rational(309329, 50000000));
  CHECK(kHw.b == Rational(13563, 1250));
  CHECK(kHw.precision_bits == 0);
  CHECK_THROWS_AS(ThresholdCoefficients::from_decimal("-0.1", "1"), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdCoefficients::from_decimal("0.1", "-1"), std::invalid_argument);
}

TEST_CASE("first_fractional_one") {
  CHECK(first_fractional_one(Rational(1, 2)) == 1);
  CHECK(first_fractional_one(Rational(1, 4)) == 2);
  CHECK(first_fractional_one(Rational::from_decimal("10.8504")) == 1);  // 0.8504 >= 1/2
  CHECK(first_fractional_one(Rational::from_decimal("0.00618658")) == 8);
  CHECK(first_fractional_one(Rational(7)) == 0);
  CHECK(first_fractional_one(Rational(0)) == 0);
}

TEST_CASE("quantization golden values") {
  auto q7 = bikebf::quantize(kHw, 7);
  CHECK(q7.a == Rational::from_decimal("0.00616455078125"));
  CHECK(q7.a == Rational(101, 16384));
  CHECK(q7.b == Rational::from_decimal("10.84375"));
  CHECK(q7.precision_bits == 7);

  auto q2 = bikebf::quantize(kHw, 2);
  CHECK(q2.a == Rational::from_decimal("0.005859375"));
  CHECK(q2.b == Rational::from_decimal("10.75"));
  CHECK(q2.precision_bits == 2);
}

TEST_CASE("quantization binary renderings") {
  auto rep_full = bikebf::describe_coefficients(kHw);
  CHECK(rep_full.a.binary == "0.00000001100101010111...");
  CHECK(rep_full.a.decimal == "0.00618658");
  CHECK(rep_full.b.binary == "1010.11011001101100111101...");
  CHECK(rep_full.b.decimal == "10.8504");

  auto rep7 = bikebf::describe_coefficients(bikebf::quantize(kHw, 7));
  CHECK(rep7.a.binary == "0.00000001100101");  // MSNB window: bits 8..14
  CHECK(rep7.a.decimal == "0.00616455078125");
  CHECK(rep7.b.binary == "1010.1101100");
  CHECK(rep7.b.decimal == "10.84375");

  auto rep2 = bikebf::describe_coefficients(bikebf::quantize(kHw, 2));
  CHECK(rep2.a.binary == "0.000000011");
  CHECK(rep2.a.decimal == "0.005859375");
  CHECK(rep2.b.binary == "1010.11");
  CHECK(rep2.b.decimal == "10.75");
}

TEST_CASE("quantization properties: idempotent, truncating, error-bounded") {
  const char* a_texts[] = {"0.00618658", "0.006258", "0.0001", "0.4999", "0.75"};
  const char* b_texts[] = {"10.8504", "11.094", "3", "0.001", "127.999"};
  for (const char* at : a_texts) {
    for (const char* bt : b_texts) {
      ThresholdCoefficients full = ThresholdCoefficients::from_decimal(at, bt);
      for (unsigned k = 1; k <= 10; ++k) {
        CAPTURE(at);
        CAPTURE(bt);
        CAPTURE(k);
        auto q = bikebf::quantize(full, k);
        CHECK(bikebf::quantize(q, k) == q);  // idempotent
        CHECK(q.a <= full.a);                // truncation never rounds up
        CHECK(q.b <= full.b);
        unsigned p0 = first_fractional_one(full.a);
        if (p0 != 0) CHECK(full.a - q.a < Rational::dyadic(1, p0 + k - 1));
        CHECK(full.b - q.b < Rational::dyadic(1, k));
        // Integer parts survive untouched.
        CHECK(q.a.floor() == full.a.floor());
        CHECK(q.b.floor() == full.b.floor());
      }
    }
  }
}

TEST_CASE("quantize edge cases") {
  auto c = ThresholdCoefficients::from_decimal("2", "5");  // both integral
  auto q = bikebf::quantize(c, 4);
  CHECK(q.a == Rational(2));  // no fractional one to anchor the window: unchanged
  CHECK(q.b == Rational(5));
  CHECK(q.precision_bits == 4);
  auto z = bikebf::quantize(ThresholdCoefficients::from_decimal("0", "0.75"), 1);
  CHECK(z.a == Rational(0));
  CHECK(z.b == Rational(1, 2));
  CHECK_THROWS_AS(bikebf::quantize(c, 0), std::invalid_argument);
}

TEST_CASE("eval_threshold_fn is exact") {
  CHECK(eval_threshold_fn(kFull, 1000) == Rational::from_decimal("17.352"));
  CHECK(eval_threshold_fn(kHw, 4096) == Rational(28273931, 781250));
  auto q7 = bikebf::quantize(kHw, 7);
  CHECK(eval_threshold_fn(q7, 4096) == Rational::from_decimal("36.09375"));
  CHECK(eval_threshold_fn(q7, 0) == q7.b);
}

TEST_CASE("make_threshold_state") {
  auto st = bikebf::make_threshold_state(kHw, 4096, 71, 3);
  CHECK(st.initial_threshold == Rational(28273931, 781250));
  CHECK(st.majority == 36);  // (71 + 1) / 2
  CHECK(st.delta == 3);
  CHECK(bikebf::make_threshold_state(kHw, 0, 3, 1).majority == 2);
  CHECK(bikebf::make_threshold_state(kHw, 0, 4, 1).majority == 2);  // integer division
}

TEST_CASE("iteration threshold schedule") {
  // Pin f to zero so the schedule base is visible on its own.
  auto zero = ThresholdCoefficients::from_decimal("0", "0");
  ThresholdState st{Rational(45), 36, 3};  // T' = 45, M = 36, delta = 3
  CHECK(bikebf::threshold_for_iteration(1, 500, st, zero) == Rational(48));  // T' + 3
  CHECK(bikebf::threshold_for_iteration(2, 500, st, zero) == Rational(45));  // (90+36)/3 + 3
  CHECK(bikebf::threshold_for_iteration(3, 500, st, zero) == Rational(42));  // (45+72)/3 + 3
  for (unsigned i = 4; i <= 9; ++i)
    CHECK(bikebf::threshold_for_iteration(i, 500, st, zero) == Rational(39));  // M + 3

  // Non-divisible thirds stay exact rationals.
  ThresholdState st2{Rational(46), 36, 3};
  CHECK(bikebf::threshold_for_iteration(2, 500, st2, zero) == Rational(128, 3) + Rational(3));
  CHECK(bikebf::threshold_for_iteration(3, 500, st2, zero) ==
        Rational(118, 3) + Rational(3));

  // ... unless the hardware-style truncation of the quotient is requested.
  CHECK(bikebf::threshold_for_iteration(2, 500, st2, zero, 4) ==
        Rational::from_decimal("45.625"));  // floor(128/3 * 16)/16 + 3
  // Truncation to 0 fractional bits floors the quotient.
  CHECK(bikebf::threshold_for_iteration(2, 500, st2, zero, 0) == Rational(45));

  CHECK_THROWS_AS(bikebf::threshold_for_iteration(0, 10, st, zero), std::invalid_argument);
}

TEST_CASE("threshold takes the max of f and the schedule base") {
  auto high_f = ThresholdCoefficients::from_decimal("0", "50");
  ThresholdState st{Rational(10), 5, 1};
  for (unsigned i = 1; i <= 5; ++i)
    CHECK(bikebf::threshold_for_iteration(i, 123, st, high_f) == Rational(50));

  auto low_f = ThresholdCoefficients::from_decimal("0", "1");
  CHECK(bikebf::threshold_for_iteration(1, 123, st, low_f) == Rational(11));  // base wins
}

TEST_CASE("threshold reacts to the current weight through f") {
  ThresholdState st{Rational(0), 1, 1};
  auto slope = ThresholdCoefficients::from_decimal("0.5", "0");
  CHECK(bikebf::threshold_for_iteration(4, 100, st, slope) == Rational(50));
  CHECK(bikebf::threshold_for_iteration(4, 3, st, slope) == Rational(2));  // base M+1
}

TEST_CASE("binary_expansion") {
  CHECK(binary_expansion(Rational(10)) == "1010");
  CHECK(binary_expansion(Rational(0)) == "0");
  CHECK(binary_expansion(Rational::from_decimal("10.84375"), 7) == "1010.1101100");
  CHECK(binary_expansion(Rational::from_decimal("10.75"), 2) == "1010.11");
  CHECK(binary_expansion(Rational(1, 2)) == "0.1");  // free mode stops when exact
  CHECK(binary_expansion(Rational(1, 3)) == "0.01010101010101010101...");
  CHECK(binary_expansion(Rational(1, 3), 0, 4) == "0.0101...");
  CHECK(binary_expansion(Rational(5, 8), 3) == "0.101");
  CHECK(binary_expansion(Rational(5), 2) == "101.00");  // window pads integers
  CHECK_THROWS_AS(binary_expansion(Rational(1, 3), 4), std::invalid_argument);  // no fit
  CHECK_THROWS_AS(binary_expansion(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("describe_coefficients with a zero slope") {
  auto c = bikebf::quantize(ThresholdCoefficients::from_decimal("0", "10.8504"), 7);
  auto rep = bikebf::describe_coefficients(c);
  CHECK(rep.a.binary == "0");
  CHECK(rep.a.decimal == "0");
  CHECK(rep.b.binary == "1010.1101100");
}
