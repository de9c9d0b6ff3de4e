#include "fcast/eval/metrics.hpp"
#include "fcast/core/errors.hpp"

#include <cmath>

namespace fcast::eval {

namespace {

void check(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw ModelError(std::string(what) + ": length mismatch");
    }
    if (a.empty()) {
        throw ModelError(std::string(what) + ": empty input");
    }
}

} // namespace

double rmse(std::span<const double> predictions, std::span<const double> truths) {
    check(predictions, truths, "rmse");
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - truths[i];
        total += e * e;
    }
    return std::sqrt(total / double(predictions.size()));
}

double mae(std::span<const double> predictions, std::span<const double> truths) {
    check(predictions, truths, "mae");
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        total += std::abs(predictions[i] - truths[i]);
    }
    return total / double(predictions.size());
}

double model_delta(std::span<const double> predictions_a,
                   std::span<const double> predictions_b) {
    check(predictions_a, predictions_b, "model_delta");
    return mae(predictions_a, predictions_b);
}

} // namespace fcast::eval
