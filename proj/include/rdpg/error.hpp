// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rdpg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or layouts that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A numeric argument outside its admissible range (probabilities, weights...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A call sequence or parameter combination the API does not accept.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Retained eigenvalues of an embedding are negative and clamping is off.
class IndefiniteSpectrumError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

    /// Same error with `context` (e.g. a file name) prefixed to the message.
    static ParseError in(const std::string& context, const ParseError& e) {
        return ParseError(context + ": " + e.what(), e.line_, Raw{});
    }

private:
    struct Raw {};
    ParseError(const std::string& what, std::size_t line, Raw) : Error(what), line_(line) {}

private:
    std::size_t line_;
};

/// Filesystem failures.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace rdpg
