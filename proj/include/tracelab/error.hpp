#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric failures: the computation is well posed but cannot be carried out
/// at working precision or range.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Opposite-signed operands agree beyond working precision; the caller must
/// use an analytic difference form.
class CancellationUnderflow : public NumericError {
public:
    using NumericError::NumericError;
};

class DivisionByZero : public NumericError {
public:
    using NumericError::NumericError;
};

class NegativeBasePow : public NumericError {
public:
    using NumericError::NumericError;
};

/// |logmag| exceeded the configured bound.
class LogRangeError : public NumericError {
public:
    using NumericError::NumericError;
};

class DivergentTail : public NumericError {
public:
    using NumericError::NumericError;
};

class RangeTooDeep : public NumericError {
public:
    using NumericError::NumericError;
};

class GridTooCoarse : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainTooSmall : public NumericError {
public:
    using NumericError::NumericError;
};

class HorizonTooShort : public NumericError {
public:
    using NumericError::NumericError;
};

class NotPeriodic : public NumericError {
public:
    using NumericError::NumericError;
};

/// Malformed input: bad operator file, invalid parameters, bad config.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A model violates a structural requirement of the requested analysis
/// (not positive, spectrum missing, invariants broken).
class ModelError : public Error {
public:
    using Error::Error;
};

}  // namespace tracelab
