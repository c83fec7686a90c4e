#pragma once

#include <stdexcept>
#include <string>

namespace gradsense {

/// Problems with user-supplied data: missing files, parse failures, shape
/// mismatches. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite loss or gradient during training. Carries the epoch at which
/// the first non-finite value appeared. CLI exit code 3.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, int epoch)
        : std::runtime_error(what), epoch_(epoch) {}

    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

/// Rank correlation requested for a vector with fewer than two distinct
/// values; the coefficient is undefined there.
class ConstantInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace gradsense
