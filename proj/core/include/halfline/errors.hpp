#pragma once

#include <stdexcept>
#include <string>

namespace halfline {

// Violated precondition or malformed input.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The computation is well-posed but the requested resolution cannot represent
// it without aliasing. Callers should refine the grid or coarsen epsilon.
class ResolutionRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace halfline
