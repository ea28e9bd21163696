#pragma once

#include <stdexcept>
#include <string>

namespace airgate {

/// Input data violates a documented invariant (malformed file, bad sample,
/// degenerate corpus). The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller passed an invalid argument combination (unknown user, bad
/// hyperparameter). The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace airgate
