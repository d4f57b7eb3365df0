#pragma once

#include <stdexcept>
#include <string>

namespace shiftbench {

/// Thrown when an input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw ValidationError(message);
    }
}

} // namespace shiftbench
