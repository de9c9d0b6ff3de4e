#include "fcast/models/glm.hpp"
#include "fcast/core/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace fcast::models {

namespace {

struct Rows {
    Eigen::VectorXd z; // log x(t-1)
    Eigen::VectorXd y; // x(t)
};

Rows build_rows(const ValueSeries& training) {
    const std::size_t n = training.size();
    Rows rows;
    rows.z.resize(n - 1);
    rows.y.resize(n - 1);
    const auto values = training.values();
    for (std::size_t t = 1; t < n; ++t) {
        rows.z(t - 1) = std::log(values[t - 1]);
        rows.y(t - 1) = values[t];
    }
    return rows;
}

// Least-squares on the log scale: log y ~ intercept + slope * z. Exact for
// noiseless multiplicative data, a good Newton starting point otherwise.
Eigen::Vector2d log_scale_start(const Rows& rows) {
    const auto n = rows.z.size();
    Eigen::MatrixXd design(n, 2);
    design.col(0).setOnes();
    design.col(1) = rows.z;
    const Eigen::VectorXd log_y = rows.y.array().log().matrix();
    return design.colPivHouseholderQr().solve(log_y);
}

// Intercept-only fit with the slope pinned at 1: minimize sum (y - a x)^2
// over a = exp(intercept), which has the closed form a = <x,y>/<x,x>.
GlmFit pinned_slope_fit(const Rows& rows) {
    const Eigen::VectorXd x = rows.z.array().exp().matrix();
    const double a = x.dot(rows.y) / x.dot(x);
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw FitDivergedError("glm: degenerate-design fallback failed");
    }
    GlmFit fit;
    fit.intercept = std::log(a);
    fit.slope = 1.0;
    fit.iterations = 0;
    fit.converged = true;
    return fit;
}

} // namespace

GlmFit fit_glm(const ValueSeries& training, const GlmOptions& options) {
    if (training.size() < 10) {
        throw ModelError("glm: need at least 10 training values");
    }
    if (!training.all_positive()) {
        throw ModelError("glm: training values must be strictly positive (log link)");
    }

    const Rows rows = build_rows(training);

    const double z_mean = rows.z.mean();
    const double z_var = (rows.z.array() - z_mean).square().mean();
    if (z_var < 1e-18) {
        return pinned_slope_fit(rows);
    }

    Eigen::Vector2d beta = log_scale_start(rows);

    GlmFit fit;
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const Eigen::ArrayXd eta = beta(0) + beta(1) * rows.z.array();
        const Eigen::ArrayXd mu = eta.exp();
        const Eigen::ArrayXd resid = rows.y.array() - mu;

        // Gaussian log-likelihood up to constants is -1/2 sum (y - mu)^2;
        // with the log link d mu / d eta = mu.
        Eigen::Vector2d grad;
        grad(0) = (resid * mu).sum();
        grad(1) = (resid * mu * rows.z.array()).sum();

        const Eigen::ArrayXd w = mu * mu - resid * mu; // -d^2 ll / d eta^2
        Eigen::Matrix2d hessian;
        hessian(0, 0) = w.sum();
        hessian(0, 1) = (w * rows.z.array()).sum();
        hessian(1, 0) = hessian(0, 1);
        hessian(1, 1) = (w * rows.z.array().square()).sum();

        const Eigen::FullPivLU<Eigen::Matrix2d> lu(hessian);
        if (!lu.isInvertible()) {
            throw FitDivergedError("glm: singular Hessian at iteration " +
                                   std::to_string(iter));
        }
        const Eigen::Vector2d step = lu.solve(grad);
        if (!step.allFinite()) {
            throw FitDivergedError("glm: non-finite Newton step at iteration " +
                                   std::to_string(iter));
        }
        beta += step;
        fit.iterations = iter;
        if (step.cwiseAbs().maxCoeff() < options.step_tolerance) {
            fit.converged = true;
            break;
        }
    }

    if (!beta.allFinite()) {
        throw FitDivergedError("glm: fit diverged");
    }
    fit.intercept = beta(0);
    fit.slope = beta(1);
    return fit;
}

double glm_predict_value(const GlmFit& fit, double last_value) {
    if (!(last_value > 0.0)) {
        throw ModelError("glm: last history value must be positive");
    }
    // exp(b0 + b1 log x) written multiplicatively, so the driftless
    // reduction (b0 = 0, b1 = 1) returns the last value exactly.
    return std::exp(fit.intercept) * std::pow(last_value, fit.slope);
}

double glm_predict(const GlmFit& fit, const ValueSeries& history) {
    if (history.empty()) {
        throw EmptyDataError("glm: cannot predict from an empty history");
    }
    return glm_predict_value(fit, history.back());
}

double GlmForecaster::predict_next(const ValueSeries& history) const {
    if (!fitted_) {
        throw ModelError("glm forecaster: predict_next before fit");
    }
    return glm_predict(fit_, history);
}

const GlmFit& GlmForecaster::coefficients() const {
    if (!fitted_) {
        throw ModelError("glm forecaster: coefficients before fit");
    }
    return fit_;
}

} // namespace fcast::models
