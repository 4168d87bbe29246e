#pragma once

#include <stdexcept>
#include <string>

namespace nsk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula (v <= 0, theta <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A coefficient model produced an inadmissible value (e.g. nonpositive heat capacity).
class ModelViolation : public Error {
public:
    using Error::Error;
};

/// Root bracketing failed; for the middle-state solver this means the end states
/// lie outside the rarefaction/contact/rarefaction region.
class BracketError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// v or theta left the admissible range during time stepping.
class PositivityError : public Error {
public:
    using Error::Error;
};

class BlowUpError : public Error {
public:
    using Error::Error;
};

class LengthError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace nsk
