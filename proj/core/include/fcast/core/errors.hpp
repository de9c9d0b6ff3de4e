#pragma once

#include <stdexcept>
#include <string>

namespace fcast {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data: bad CSV row, unparseable JSON field, OHLC violation.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A source produced no usable rows at all.
class EmptyDataError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or argument values (specs, weights, schemas).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Network-level failure while fetching remote data.
class TransportError : public Error {
public:
    using Error::Error;
};

/// The vendor answered with its rate-limit message instead of data.
/// Distinct from TransportError so callers can back off and retry.
class ThrottledError : public TransportError {
public:
    using TransportError::TransportError;
};

/// Numerical or model-fitting failure.
class ModelError : public Error {
public:
    using Error::Error;
};

/// The regression design matrix is rank deficient.
class SingularFitError : public ModelError {
public:
    using ModelError::ModelError;
};

/// An iterative fit produced a non-finite step.
class FitDivergedError : public ModelError {
public:
    using ModelError::ModelError;
};

/// Training loss became non-finite; carries the epoch where it happened.
class TrainingDivergedError : public ModelError {
public:
    TrainingDivergedError(const std::string& what, int epoch)
        : ModelError(what), epoch_(epoch) {}

    int epoch() const { return epoch_; }

private:
    int epoch_;
};

} // namespace fcast
