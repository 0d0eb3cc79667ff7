#pragma once

#include <stdexcept>
#include <string>

namespace qcb {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad expression syntax, schema violation, arity mismatch.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

/// Expression syntax error with a 1-based column position.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t column)
        : InputError(what + " at column " + std::to_string(column)), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// A mathematically well-posed query with a negative outcome that is an
/// error at the value level (zero denominator, pole at specialization).
class MathError : public Error {
public:
    explicit MathError(const std::string& what) : Error(what) {}
};

} // namespace qcb
