#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orc {

// Base for every error the library raises on a violated precondition.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Raised when a measure cannot be formed (isolated vertex, all-singleton
// incidences, ...) or an input measure is malformed.
class MeasureError : public Error {
public:
    using Error::Error;
};

// Raised when a bound or curvature is requested for a pair that is not at
// distance one, or for points in different components.
class NotAdjacentError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

}  // namespace orc
