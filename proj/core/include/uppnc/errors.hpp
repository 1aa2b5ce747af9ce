#pragma once

#include <stdexcept>
#include <string>

namespace upp {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument, violated precondition, or undefined operation
// (e.g. adding +inf and -inf).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed textual input.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// The sub-additive closure did not stabilize within the doubling limit.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// A computation ran past the configured wall-clock budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace upp
