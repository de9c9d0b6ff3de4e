#pragma once

#include "fcast/core/random_walk.hpp"
#include "fcast/core/transforms.hpp"
#include "fcast/eval/split.hpp"
#include "fcast/models/forecaster.hpp"
#include "fcast/models/lstm.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fcast::cli {

/// One declarative experiment: data source, transform, models, split, seed,
/// output directory. Schema-checked up front; unknown keys are rejected so
/// typos fail loudly instead of silently changing an experiment.
struct ExperimentConfig {
    static constexpr int kFormatVersion = 1;

    enum class DataKind { Csv, Symbol, Generator };

    struct DataSpec {
        DataKind kind = DataKind::Csv;
        std::filesystem::path csv_path;            // Csv
        std::string symbol;                        // Symbol (also csv label)
        std::filesystem::path cache_dir = ".cache"; // Symbol
        GeneratorSpec generator;                   // Generator
        bool drift_flip = false; // regime change: drift sign flips mid-series
    };

    struct ModelSpec {
        std::string kind;  // martingale | linear | glm | lstm
        std::string label; // report row name; defaults to the forecaster name
        std::vector<int> lags{1};
        models::TrainConfig lstm;
    };

    struct EnsembleSpec {
        double eta = 0.0; // 0 means the regret-optimal rate for the run
        std::optional<double> loss_cap;
        models::LossKind loss = models::LossKind::SquaredError;
        std::size_t target_window = 0; // 0 means rounds/2
        double stability_coeff = 12.0;
    };

    struct StrategySpec {
        std::size_t lookback = 20;
        double entry_threshold = 0.05;
        double position_size = 1.0;
        double initial_cash = 10000.0;
        double fee_per_trade = 0.0;
        double train_fraction = 0.0; // 0: no fit (martingale only)
        ModelSpec forecaster{"martingale", "", {1}, {}};
    };

    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    DataSpec data;
    Transform transform = Transform::Close;
    eval::SplitSpec split;
    std::vector<ModelSpec> models;
    EnsembleSpec ensemble;
    StrategySpec strategy;
    int jobs = 1;

    static ExperimentConfig load(const std::filesystem::path& path);
    static ExperimentConfig parse(const nlohmann::json& doc,
                                  const std::string& context);
};

/// Instantiates an unfitted forecaster from a model spec. The global seed
/// feeds models that do not pin their own.
models::ForecasterPtr make_forecaster(const ExperimentConfig::ModelSpec& spec,
                                      std::uint64_t global_seed);

/// Row label for reports: explicit label if given, else the forecaster name.
std::string model_label(const ExperimentConfig::ModelSpec& spec,
                        std::uint64_t global_seed);

} // namespace fcast::cli
