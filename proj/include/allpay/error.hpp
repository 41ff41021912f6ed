#pragma once

#include <stdexcept>
#include <string>

namespace allpay {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter violates a documented constraint.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A value was passed outside the open support of a distribution.
class OutOfSupport : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

/// A numerical procedure could not produce an answer (no root bracket,
/// degenerate contest, undefined ratio).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class NoSignChange : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

} // namespace allpay
