#pragma once

#include <stdexcept>
#include <string>

namespace apfree {

// Base of every error the library throws on bad input or exhausted limits.
// Internal invariant violations are reported as std::logic_error instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter is outside the operation's contract (k < 3, composite k, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A configured resource limit (universe size, node budget) would be exceeded.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

// A numeric evaluation is undefined at the requested point, e.g. a
// logarithm of a non-positive value.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed textual input. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace apfree
