#include "fcast/models/lagged_linear.hpp"
#include "fcast/core/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace fcast::models {

namespace {

std::string lag_set_text(const LagSpec& lags) {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < lags.lags.size(); ++i) {
        out << (i ? "," : "") << lags.lags[i];
    }
    out << "}";
    return out.str();
}

} // namespace

void LagSpec::validate() const {
    if (lags.empty()) {
        throw ConfigError("lag spec: at least one lag required");
    }
    for (std::size_t i = 0; i < lags.size(); ++i) {
        if (lags[i] < 1) {
            throw ConfigError("lag spec: lags must be >= 1");
        }
        if (i > 0 && lags[i] <= lags[i - 1]) {
            throw ConfigError("lag spec: lags must be strictly increasing");
        }
    }
}

int LagSpec::max_lag() const { return lags.empty() ? 0 : lags.back(); }

LinearFit fit_linear(const ValueSeries& training, const LagSpec& lags) {
    lags.validate();
    const std::size_t n = training.size();
    const std::size_t k = lags.lags.size();
    const std::size_t max_lag = static_cast<std::size_t>(lags.max_lag());
    if (n <= max_lag + k + 1) {
        throw ModelError("linear fit: training window too short for lags " +
                         lag_set_text(lags));
    }

    // Rows with an unresolvable lag are dropped, not imputed.
    const std::size_t rows = n - max_lag;
    Eigen::MatrixXd design(rows, k + 1);
    Eigen::VectorXd target(rows);
    const auto values = training.values();
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = max_lag + r;
        for (std::size_t j = 0; j < k; ++j) {
            design(r, j) = values[t - static_cast<std::size_t>(lags.lags[j])];
        }
        design(r, k) = 1.0;
        target(r) = values[t];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(k + 1)) {
        throw SingularFitError("linear fit: rank-deficient design for lags " +
                               lag_set_text(lags));
    }
    const Eigen::VectorXd beta = qr.solve(target);
    if (!beta.allFinite()) {
        throw FitDivergedError("linear fit: non-finite solution for lags " +
                               lag_set_text(lags));
    }

    LinearFit fit;
    fit.weights.assign(beta.data(), beta.data() + k);
    fit.intercept = beta(k);
    return fit;
}

double linear_predict(const LinearFit& fit, const LagSpec& lags,
                      const ValueSeries& history) {
    const std::size_t n = history.size();
    const std::size_t max_lag = static_cast<std::size_t>(lags.max_lag());
    if (n < max_lag) {
        throw ModelError("linear predict: history shorter than max lag " +
                         std::to_string(max_lag));
    }
    // Predicting x(n) from history indices n - lag.
    double y = fit.intercept;
    for (std::size_t j = 0; j < lags.lags.size(); ++j) {
        y += fit.weights[j] * history.value(n - static_cast<std::size_t>(lags.lags[j]));
    }
    return y;
}

std::string LaggedLinearForecaster::name() const {
    return "linear" + lag_set_text(lags_);
}

double LaggedLinearForecaster::predict_next(const ValueSeries& history) const {
    if (!fitted_) {
        throw ModelError("linear forecaster: predict_next before fit");
    }
    return linear_predict(fit_, lags_, history);
}

const LinearFit& LaggedLinearForecaster::coefficients() const {
    if (!fitted_) {
        throw ModelError("linear forecaster: coefficients before fit");
    }
    return fit_;
}

} // namespace fcast::models
