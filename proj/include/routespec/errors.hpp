#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace routespec {

/// Error categories; values double as CLI exit codes.
enum class ErrorCode : int {
    input = 1,      ///< malformed input or violated network invariants
    budget = 2,     ///< simple-path count exceeds the enumeration budget
    numerical = 3,  ///< iteration non-convergence or integer overflow
};

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what_arg)
        : std::runtime_error(what_arg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

/// Malformed input text, dimension mismatches, or invalid networks.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what_arg)
        : Error(ErrorCode::input, what_arg) {}
};

/// Simple-path count exceeds the enumeration budget.
class BudgetError : public Error {
public:
    BudgetError(std::uint64_t count, std::uint64_t budget)
        : Error(ErrorCode::budget, "path count " + std::to_string(count) +
                                       " exceeds budget " + std::to_string(budget)),
          count_(count),
          budget_(budget) {}

    std::uint64_t count() const noexcept { return count_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t count_;
    std::uint64_t budget_;
};

/// Numerical failure: non-convergence, overflow, or degenerate data.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what_arg)
        : Error(ErrorCode::numerical, what_arg) {}
};

}  // namespace routespec
