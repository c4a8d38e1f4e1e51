#pragma once

#include <stdexcept>
#include <string>

namespace horoflow {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A derived quantity came out NaN or infinite (invalid or under-resolved input).
struct NonFiniteError : Error {
    using Error::Error;
};

/// Input outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

/// Operation requires curvature strictly above 1 everywhere.
struct NotStrictlyHConvexError : Error {
    using Error::Error;
};

/// Operation requires curvature at least 1 everywhere.
struct NotHConvexError : Error {
    using Error::Error;
};

/// Spectrum is outside the Garding cone required by the inequality.
struct NotInConeError : Error {
    using Error::Error;
};

/// Flow run hit the curvature margin floor (or a monitor blew up 10x).
struct AbortedMarginError : Error {
    using Error::Error;
};

/// Decay-rate fit window is empty or spans less than a decade.
struct InsufficientDecayError : Error {
    using Error::Error;
};

/// Root bracketing failed for a monotone inversion.
struct OutOfRangeError : Error {
    using Error::Error;
};

/// Malformed run configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// File read/write failure.
struct IoError : Error {
    using Error::Error;
};

} // namespace horoflow
