#pragma once

#include <stdexcept>
#include <string>

namespace cyclosense {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter set. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A call violated an operation precondition. CLI exit code 2.
class ArgumentError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Input outside the mathematical domain of a closed-form expression. CLI exit code 2.
class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Numeric or runtime failure during a computation. CLI exit code 3.
class RunError : public Error {
public:
    using Error::Error;
};

/// File system failure. CLI exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cyclosense
