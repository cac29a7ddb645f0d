#pragma once

#include <stdexcept>
#include <string>

namespace oscar {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or out-of-range input values (parameters, preconditions).
struct ValidationError : Error {
    using Error::Error;
};

/// State leaking out of the truncated oscillator basis.
struct TruncationError : Error {
    using Error::Error;
};

/// Inconsistent or conflicting evolution timeline.
struct ScheduleError : Error {
    using Error::Error;
};

/// Degenerate or empty series handed to the analysis routines.
struct AnalysisError : Error {
    using Error::Error;
};

/// Malformed configuration file or command line.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace oscar
