#pragma once

#include <stdexcept>
#include <string>

namespace regkit {

/// Shape mismatch between operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A direction vector that must be nonzero is zero.
struct DegenerateDirectionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input violates a domain precondition (non-disjoint sets, bad graph, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An exhaustive enumeration would exceed its configured budget.
/// Callers of exact cut-norm routines should fall back to the heuristic.
struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to converge. Carries the best sigma seen so far
/// so callers can report a partial result.
struct ConvergenceError : std::runtime_error {
    double best_sigma = 0.0;
    ConvergenceError(const std::string& msg, double sigma)
        : std::runtime_error(msg), best_sigma(sigma) {}
};

/// Malformed input file; line is 1-based.
struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(const std::string& msg, int line_number)
        : std::runtime_error(msg + " (line " + std::to_string(line_number) + ")"),
          line(line_number) {}
};

} // namespace regkit
