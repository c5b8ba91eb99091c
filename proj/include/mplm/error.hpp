#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mplm {

/// Raised when an argument violates an operation's precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

}  // namespace detail
}  // namespace mplm
