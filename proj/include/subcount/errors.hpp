#pragma once

#include <stdexcept>
#include <string>

namespace subcount {

struct InputOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPrime : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooFewPrimes : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct KOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotDivisible : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CapTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExponentMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct A1OutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyTerms : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Two log-space quantities whose difference falls inside the combined
// tolerance band cannot be ordered; callers must widen precision or
// switch to an exact route.
struct BoundaryComparison : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataFileMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A multiplication table that is not a valid group (bad identity row,
// missing inverses, or an associativity failure).
struct NotClosed : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidPermutation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Subgroup enumeration exceeded its count cap; partial results are
// discarded.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Group order beyond the guaranteed enumeration range without the
// explicit force flag.
struct Unsupported : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooLargeForOracle : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace subcount
