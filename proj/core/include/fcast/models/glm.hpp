#pragma once

#include "fcast/models/forecaster.hpp"

namespace fcast::models {

/// Gaussian-response GLM with a log link on the log of the lag-1 value:
///   E[x(t)] = exp(intercept + slope * log x(t-1)).
/// At slope = 1 this is exactly the multiplicative form
/// E[x(t)] = exp(intercept) * x(t-1), so the driftless reduction
/// (intercept = 0, slope = 1) is the martingale.
struct GlmFit {
    double intercept = 0.0; // beta0
    double slope = 0.0;     // beta1, on log x(t-1)
    int iterations = 0;
    bool converged = false;
};

struct GlmOptions {
    double step_tolerance = 1e-10; // max-norm of the Newton step
    int max_iterations = 100;
};

/// Maximum-likelihood fit by Newton-Raphson. Training values must be
/// strictly positive and there must be at least 10 of them.
///
/// A constant predictor column (zero variance in log x(t-1)) makes the
/// likelihood flat along a line; in that case the slope is pinned at 1 and
/// the intercept solved in closed form.
///
/// Throws ModelError on domain violations, FitDivergedError on a non-finite
/// or unsolvable Newton step.
GlmFit fit_glm(const ValueSeries& training, const GlmOptions& options = {});

/// exp(intercept + slope * log last). Throws ModelError when the last
/// history value is nonpositive.
double glm_predict(const GlmFit& fit, const ValueSeries& history);

double glm_predict_value(const GlmFit& fit, double last_value);

class GlmForecaster final : public Forecaster {
public:
    explicit GlmForecaster(GlmOptions options = {}) : options_(options) {}

    std::string name() const override { return "glm"; }

    void fit(const ValueSeries& training) override {
        fit_ = fit_glm(training, options_);
        fitted_ = true;
    }

    double predict_next(const ValueSeries& history) const override;

    const GlmFit& coefficients() const;

private:
    GlmOptions options_;
    GlmFit fit_;
    bool fitted_ = false;
};

} // namespace fcast::models
