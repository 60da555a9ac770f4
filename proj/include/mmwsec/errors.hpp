#pragma once

#include <stdexcept>
#include <string>

namespace mmwsec {

// Precondition violation by the caller (bad index, out-of-range angle, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A request that cannot be satisfied for the given parameters, e.g. more
// distinct AoDs than the angle lattice holds or a strategy needing L > 1.
class InfeasibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Configuration that violates a documented invariant. The message names it.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace mmwsec
