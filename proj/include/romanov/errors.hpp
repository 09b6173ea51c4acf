#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace romanov {

// Precondition violated by the caller (bad argument, empty range, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested range does not fit the configured memory / work budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An intermediate value would not fit in 63 bits.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Exact quadratic-irrational arithmetic ran out of 128-bit headroom.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// mod_inverse on a non-unit.
class NoInverseError : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed text input or cache file. line == 0 means "not line based".
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Internal self-check failed; always a bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace romanov
