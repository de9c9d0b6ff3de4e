#pragma once

#include "fcast/core/series.hpp"

#include <cstddef>
#include <memory>
#include <string>

namespace fcast::models {

/// Common contract for every one-step-ahead point forecaster.
///
/// fit() learns from a training window and never mutates it; predict_next()
/// is deterministic given the fitted state and the history it is shown.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    virtual std::string name() const = 0;

    virtual void fit(const ValueSeries& training) = 0;

    /// One-step-ahead forecast from the true history up to now.
    virtual double predict_next(const ValueSeries& history) const = 0;

    /// Shortest history predict_next() can work with. Evaluation uses the
    /// maximum over all competing models so every model scores the same
    /// test indices.
    virtual std::size_t min_history() const { return 1; }
};

using ForecasterPtr = std::shared_ptr<Forecaster>;

} // namespace fcast::models
