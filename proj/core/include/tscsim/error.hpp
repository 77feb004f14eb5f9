#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tscsim {

// Base of every error the library throws. The CLI maps ConfigError to exit
// code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters that can never produce a valid dataset or experiment.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A shape, parameter block or input that violates an operation's precondition.
class InvalidSpecError : public Error {
public:
    using Error::Error;
};

// Shape placement outside the host series.
class PlacementError : public Error {
public:
    using Error::Error;
};

// Random placement gave up after its retry budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

// Input combination the implementation does not handle (e.g. unequal lengths).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Results document written by an incompatible schema version.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Results document that parses but violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace tscsim
