#pragma once

#include <stdexcept>
#include <string>

namespace lhv {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input for which the model is undefined (e.g. a zero membership vector).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    using Error::Error;
};

/// Integration produced a non-finite state.
class IntegrationBlowup : public Error {
public:
    explicit IntegrationBlowup(double time)
        : Error("integration produced a non-finite state at t = " + std::to_string(time)), time_(time)
    {
    }

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

/// A parameter or configuration value outside its admissible range.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

/// Lookup of a correlation at an angle that was never simulated.
class MissingGridPoint : public Error {
public:
    using Error::Error;
};

/// Failure writing results.
class OutputError : public Error {
public:
    using Error::Error;
};

// Configuration parsing.

class ConfigError : public Error {
public:
    using Error::Error;
};

class MissingFile : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MalformedValue : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnknownKey : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace lhv
