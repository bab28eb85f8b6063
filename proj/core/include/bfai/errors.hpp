#pragma once

#include <stdexcept>
#include <string>

namespace bfai {

/// Every arm violates some constraint under the supplied means.
struct NoFeasibleArmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The feasible argmax of the objective is not unique (true-mean input only).
struct TiedBestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation requiring at least one sample per arm saw a zero-count arm.
struct UninformedArmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A rate term was requested for the best arm itself.
struct BadArmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The allocation problem has no non-best arms to allocate over.
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Budget smaller than the warm-up requirement k * n0.
struct BudgetTooSmallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unrecognized experiment identifier.
struct UnknownIdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bfai
