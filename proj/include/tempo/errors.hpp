#pragma once

#include <stdexcept>
#include <string>

namespace tempo {

// Malformed input to a public operation: non-finite angles, dimension
// mismatches, unnormalized kets where normalized ones are required.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested register is larger than the three-qubit simulator supports.
class UnsupportedDimension : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A two-time chain whose consecutive projectors are orthogonal has zero
// weight and cannot be normalized.
class NullHistory : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace tempo
