#pragma once

#include <stdexcept>
#include <string>

namespace artiq {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file.
class IoError : public Error {
public:
    using Error::Error;
};

/// Parameters outside a function's domain (negative df, zero totals, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A reported statistic that cannot be recomputed (df <= 0, |r| >= 1).
class InvalidTestError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A statistic that is mathematically undefined for the given input,
/// e.g. FRE of a text without words or ANOVA over constant data.
class UndefinedError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Bad command line or configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace artiq
