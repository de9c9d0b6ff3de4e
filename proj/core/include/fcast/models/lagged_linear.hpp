#pragma once

#include "fcast/models/forecaster.hpp"

#include <vector>

namespace fcast::models {

/// Which past values feed the linear model, in trading days.
struct LagSpec {
    std::vector<int> lags;

    /// Throws ConfigError unless lags are strictly increasing and >= 1.
    void validate() const;

    int max_lag() const;

    static LagSpec single_day() { return LagSpec{{1}}; }

    /// Days 1-4 back plus one-week (5), one-month (21) and one-quarter (63)
    /// trading-day horizons.
    static LagSpec periodic_mix() { return LagSpec{{1, 2, 3, 4, 5, 21, 63}}; }
};

struct LinearFit {
    std::vector<double> weights; // one per lag
    double intercept = 0.0;
};

/// Ordinary least squares over rows (x(t-lag_1), ..., x(t-lag_k), 1) -> x(t)
/// for every t where all lags resolve inside the training window. Solved via
/// column-pivoted QR, not the raw normal equations.
///
/// Throws SingularFitError (naming the lag set) on a rank-deficient design,
/// ModelError when the window is too short.
LinearFit fit_linear(const ValueSeries& training, const LagSpec& lags);

/// Applies a fit to the tail of a history.
double linear_predict(const LinearFit& fit, const LagSpec& lags,
                      const ValueSeries& history);

class LaggedLinearForecaster final : public Forecaster {
public:
    explicit LaggedLinearForecaster(LagSpec lags) : lags_(std::move(lags)) {
        lags_.validate();
    }

    std::string name() const override;

    void fit(const ValueSeries& training) override {
        fit_ = fit_linear(training, lags_);
        fitted_ = true;
    }

    double predict_next(const ValueSeries& history) const override;

    std::size_t min_history() const override {
        return static_cast<std::size_t>(lags_.max_lag());
    }

    const LinearFit& coefficients() const;

private:
    LagSpec lags_;
    LinearFit fit_;
    bool fitted_ = false;
};

} // namespace fcast::models
