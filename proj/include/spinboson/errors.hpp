// errors.hpp — Error types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace spinboson {

// Base for all library-specific failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature refinements failed to agree within 10x the requested tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

// The requested Hilbert-transform point lies at or above the integration cutoff.
struct InvalidCutoff : Error {
    using Error::Error;
};

// The principal-value integral does not exist (non-integrable singularity),
// e.g. I(0) for a density with J(0+) > 0.
struct DivergentIntegral : Error {
    using Error::Error;
};

// The damping condition sigma(alpha) = nu*Delta has no positive solution.
struct NoSolution : Error {
    using Error::Error;
};

// Requested bath discretization exceeds the configured state-vector budget.
struct DimensionBudgetExceeded : Error {
    using Error::Error;
};

// Step halving did not reach the propagator accuracy target within budget.
struct StepControlFailure : Error {
    using Error::Error;
};

// Requested physical horizon t/lambda^2 reaches the bath recurrence time.
struct RecurrenceHorizon : Error {
    using Error::Error;
};

// Scenario file could not be parsed; carries the offending line number.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_number)
        : Error(msg), line(line_number) {}
    int line;
};

// Scenario content failed validation; carries the offending field/key name.
struct ValidationError : Error {
    ValidationError(const std::string& msg, std::string field_name)
        : Error(msg), field(std::move(field_name)) {}
    std::string field;
};

}  // namespace spinboson
