#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mws {

// Bad user input: malformed files, out-of-range ids, violated preconditions
// on arguments. The CLI maps these to exit code 1.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& message)
        : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// An active set that contains a cycle with exactly one repulsive edge, or
// (where required) a cycle of attractive edges.
class ConsistencyError : public InputError {
public:
    using InputError::InputError;
};

// Raised when a result contradicts something that must hold by
// construction (solver bug, oracle tie under its own preconditions).
// The CLI maps these to exit code 2.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace mws
