#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fibsite {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation does not hold (wrong target, unknown name, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// A structure failed its validator (category laws, functoriality, naturality).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Syntax error in a bundle file, with 1-based position of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column, std::string token)
        : Error(message + " at " + std::to_string(line) + ":" + std::to_string(column) +
                (token.empty() ? std::string{} : " near '" + token + "'")),
          line_(line),
          column_(column),
          token_(std::move(token)) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string token_;
};

/// The requested mode is outside what the implementation computes exactly.
class RefusedError : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed a configured size cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace fibsite
