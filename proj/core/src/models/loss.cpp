#include "fcast/models/loss.hpp"
#include "fcast/core/errors.hpp"

namespace fcast::models {

LossKind loss_from_name(const std::string& name) {
    if (name == "mse" || name == "squared") return LossKind::SquaredError;
    if (name == "mae" || name == "absolute") return LossKind::AbsoluteError;
    throw ConfigError("unknown loss '" + name + "' (want mse|mae)");
}

std::string loss_name(LossKind kind) {
    return kind == LossKind::SquaredError ? "mse" : "mae";
}

} // namespace fcast::models
