#pragma once

#include <stdexcept>
#include <string>

namespace meiperf {

// Exit-code conventions for the CLI:
//   IoError, UsageError            -> 1
//   ParseError, ValidationError    -> 2

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The caller violated an interface contract (bad options, mismatched lists).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input text that could not be read at all (CSV/XML/JSON syntax).
/// Messages carry a 1-based line number, and a column where known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Well-formed input with invalid content: out-of-range values, broken
/// links, schema mismatches.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace meiperf
