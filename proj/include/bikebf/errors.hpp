#pragma once

#include <stdexcept>
#include <string>

namespace bikebf {

// No invertible h0 found within the resample budget.
struct KeygenRetryLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-squares fit over samples whose x values are all equal.
struct DegenerateFitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// DFR extrapolation impossible (nonnegative slope or too few usable points).
struct NoExtrapolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed fixture or CSV input.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bikebf
