#pragma once

#include <cmath>
#include <string>

namespace fcast::models {

/// Pointwise loss between a prediction and an outcome.
enum class LossKind { SquaredError, AbsoluteError };

inline double loss_value(LossKind kind, double prediction, double outcome) {
    const double e = prediction - outcome;
    return kind == LossKind::SquaredError ? e * e : std::abs(e);
}

/// d loss / d prediction. The absolute-error subgradient at 0 is 0.
inline double loss_derivative(LossKind kind, double prediction, double outcome) {
    const double e = prediction - outcome;
    if (kind == LossKind::SquaredError) {
        return 2.0 * e;
    }
    return e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
}

LossKind loss_from_name(const std::string& name);
std::string loss_name(LossKind kind);

} // namespace fcast::models
