#pragma once

#include "fcast/eval/split.hpp"
#include "fcast/models/forecaster.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fcast::eval {

struct NamedForecaster {
    std::string name;
    models::ForecasterPtr model;
};

struct ModelMetrics {
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n_predictions = 0;
};

/// Per-model errors alongside the martingale's, over one declared split.
struct EvalReport {
    std::string series_id;
    std::string transform;
    std::string split_label;
    std::vector<std::pair<std::string, ModelMetrics>> models; // martingale excluded
    ModelMetrics martingale;

    nlohmann::json to_json() const;
    static EvalReport from_json(const nlohmann::json& doc);
};

/// Report plus the pointwise predictions behind it.
struct EvalRun {
    EvalReport report;
    std::vector<Date> dates;
    std::vector<double> truths;
    /// Ordered as (martingale, models...) for plot output.
    std::vector<std::pair<std::string, std::vector<double>>> predictions;
};

/// Walk-forward pass over one fold: every model is fit on the train range,
/// then predicts one step ahead at each test index from the true history
/// (never from its own previous predictions). The martingale is always
/// scored, and all models share the same test index set: the first test
/// index is pushed forward until every model's min_history resolves.
///
/// A model failure aborts the run with the model and test index named.
EvalRun evaluate_run(const std::vector<NamedForecaster>& models,
                     const ValueSeries& series, const Fold& fold,
                     std::string series_id, std::string transform_label);

EvalReport evaluate(const std::vector<NamedForecaster>& models,
                    const ValueSeries& series, const Fold& fold,
                    std::string series_id, std::string transform_label);

/// Aligned-column text table: one row per model, the model's errors next to
/// the martingale's.
std::string render_table(const EvalReport& report);

/// date, truth, one column per model. Raw material for external plotting.
void write_plot_csv(const EvalRun& run, std::ostream& out);

} // namespace fcast::eval
