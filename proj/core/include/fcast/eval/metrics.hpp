#pragma once

#include <span>

namespace fcast::eval {

/// Root mean squared error. Throws ModelError on empty or mismatched inputs.
double rmse(std::span<const double> predictions, std::span<const double> truths);

/// Mean absolute error.
double mae(std::span<const double> predictions, std::span<const double> truths);

/// MAE between two models' prediction vectors (not against truth): how far
/// apart two forecasters actually are on the same test set.
double model_delta(std::span<const double> predictions_a,
                   std::span<const double> predictions_b);

} // namespace fcast::eval
