#pragma once

#include <stdexcept>

namespace catforge {

/// Base class for all catforge errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value is outside its mathematical or configured domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Container lengths disagree (e.g. responses vs administered items).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A selector has no eligible item left to return.
class ExhaustionError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (CSV bank, JSON config).
class ParseError : public Error {
public:
    using Error::Error;
};

/// An item bank failed validation; the message lists the violations.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace catforge
