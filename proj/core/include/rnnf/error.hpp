// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace rnnf {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or arguments (bad window size, inconsistent shapes
/// requested, unknown architecture, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Structurally valid input that violates a data contract: date gaps,
/// misaligned series, degenerate scaler, insufficient history.
class DataError : public Error {
public:
    using Error::Error;
};

/// Non-finite values encountered during numeric work (training divergence,
/// rollout blow-up). Carries a human-readable location in the message.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace rnnf
