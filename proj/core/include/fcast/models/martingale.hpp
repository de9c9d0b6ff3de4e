#pragma once

#include "fcast/models/forecaster.hpp"

namespace fcast::models {

/// The martingale forecast: the next value is the last value we know.
/// Throws EmptyDataError on an empty history.
double martingale_predict(const ValueSeries& history);

/// Baseline model every evaluation is measured against. fit() is a no-op.
class MartingaleForecaster final : public Forecaster {
public:
    std::string name() const override { return "martingale"; }

    void fit(const ValueSeries&) override {}

    double predict_next(const ValueSeries& history) const override {
        return martingale_predict(history);
    }
};

} // namespace fcast::models
