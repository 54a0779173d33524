#pragma once

#include <stdexcept>
#include <string>

namespace invsim {

// Base class for every rejection the library raises. The CLI maps the
// subclasses onto process exit codes (usage 1, bad input 2, internal 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. Carries path and, when known, the 1-based line.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), path_(path), line_(line) {}
    ParseError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path), line_(0) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

// Record-level rejection while constructing a graph (dangling endpoint,
// conflicting duplicate records, empty id/label).
class BuildError : public Error {
public:
    using Error::Error;
};

// A query failed validation for the requested match mode.
class QueryValidationError : public Error {
public:
    using Error::Error;
};

// An operation was invoked outside its stated preconditions (size guards,
// non-QF anchor, label mismatch). Indicates caller misuse, not bad data.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Bad request shape (k = 0, unknown output format).
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace invsim
