#pragma once

#include "fcast/models/glm.hpp"
#include "fcast/models/lagged_linear.hpp"
#include "fcast/models/lstm.hpp"

#include <nlohmann/json.hpp>

namespace fcast::models {

/// JSON documents for fitted parameters. Every document carries a mandatory
/// "format_version" field; loading rejects documents with a different one.

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const LinearFit& fit, const LagSpec& lags);
std::pair<LinearFit, LagSpec> linear_fit_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const GlmFit& fit);
GlmFit glm_fit_from_json(const nlohmann::json& doc);

/// Named tensors plus an echo of the training configuration.
nlohmann::json to_json(const LstmModel& model);
LstmModel lstm_model_from_json(const nlohmann::json& doc);

} // namespace fcast::models
