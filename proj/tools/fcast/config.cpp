#include "config.hpp"

#include "fcast/core/errors.hpp"
#include "fcast/models/glm.hpp"
#include "fcast/models/lagged_linear.hpp"
#include "fcast/models/martingale.hpp"

#include <fstream>
#include <set>

namespace fcast::cli {

namespace {

void require_keys(const nlohmann::json& obj, const std::string& context,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!obj.is_object()) {
        throw ConfigError(context + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(context + ": unknown key '" + key + "'");
        }
    }
    for (const auto& key : required) {
        if (!obj.contains(key)) {
            throw ConfigError(context + ": missing required key '" + key + "'");
        }
    }
}

template <typename T>
T get_as(const nlohmann::json& obj, const std::string& key,
         const std::string& context) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(context + "." + key + ": " + e.what());
    }
}

template <typename T>
T get_or(const nlohmann::json& obj, const std::string& key, T fallback,
         const std::string& context) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return get_as<T>(obj, key, context);
}

ExperimentConfig::DataSpec parse_data(const nlohmann::json& doc,
                                      const std::string& context) {
    ExperimentConfig::DataSpec data;
    require_keys(doc, context,
                 {"kind", "path", "symbol", "cache_dir", "walk", "drift",
                  "volatility", "initial", "length", "seed", "martingale",
                  "drift_flip"},
                 {"kind"});
    const std::string kind = get_as<std::string>(doc, "kind", context);
    if (kind == "csv") {
        require_keys(doc, context, {"kind", "path", "symbol"}, {"path"});
        data.kind = ExperimentConfig::DataKind::Csv;
        data.csv_path = get_as<std::string>(doc, "path", context);
        data.symbol = get_or<std::string>(doc, "symbol", "", context);
    } else if (kind == "symbol") {
        require_keys(doc, context, {"kind", "symbol", "cache_dir"}, {"symbol"});
        data.kind = ExperimentConfig::DataKind::Symbol;
        data.symbol = get_as<std::string>(doc, "symbol", context);
        data.cache_dir = get_or<std::string>(doc, "cache_dir", ".cache", context);
    } else if (kind == "generator") {
        require_keys(doc, context,
                     {"kind", "walk", "drift", "volatility", "initial", "length",
                      "seed", "martingale", "symbol", "drift_flip"},
                     {"volatility", "length"});
        data.kind = ExperimentConfig::DataKind::Generator;
        data.symbol = get_or<std::string>(doc, "symbol", "SYN", context);
        const std::string walk = get_or<std::string>(doc, "walk", "geometric", context);
        if (walk == "geometric") {
            data.generator.kind = WalkKind::Geometric;
        } else if (walk == "additive") {
            data.generator.kind = WalkKind::Additive;
        } else {
            throw ConfigError(context + ".walk: want geometric|additive");
        }
        data.generator.volatility = get_as<double>(doc, "volatility", context);
        data.generator.initial = get_or<double>(doc, "initial", 100.0, context);
        data.generator.length = get_as<std::size_t>(doc, "length", context);
        data.generator.seed = get_or<std::uint64_t>(doc, "seed", 0, context);
        if (get_or<bool>(doc, "martingale", false, context)) {
            if (doc.contains("drift")) {
                throw ConfigError(context + ": give either drift or martingale, not both");
            }
            if (data.generator.kind != WalkKind::Geometric) {
                throw ConfigError(context + ": martingale drift is for geometric walks");
            }
            data.generator.drift = martingale_drift(data.generator.volatility);
        } else {
            data.generator.drift = get_or<double>(doc, "drift", 0.0, context);
        }
        data.drift_flip = get_or<bool>(doc, "drift_flip", false, context);
        data.generator.validate();
    } else {
        throw ConfigError(context + ".kind: want csv|symbol|generator");
    }
    return data;
}

eval::SplitSpec parse_split(const nlohmann::json& doc, const std::string& context) {
    eval::SplitSpec spec;
    require_keys(doc, context, {"kind", "train_fraction", "train_len", "step"},
                 {"kind"});
    const std::string kind = get_as<std::string>(doc, "kind", context);
    if (kind == "fraction") {
        spec.kind = eval::SplitKind::Fraction;
        spec.train_fraction = get_or<double>(doc, "train_fraction", 0.7, context);
    } else if (kind == "yearly") {
        spec.kind = eval::SplitKind::Yearly;
    } else if (kind == "walk-forward") {
        spec.kind = eval::SplitKind::WalkForward;
        spec.train_len = get_as<std::size_t>(doc, "train_len", context);
        spec.step = get_or<std::size_t>(doc, "step", 1, context);
    } else {
        throw ConfigError(context + ".kind: want fraction|yearly|walk-forward");
    }
    spec.validate();
    return spec;
}

ExperimentConfig::ModelSpec parse_model(const nlohmann::json& doc,
                                        const std::string& context,
                                        std::uint64_t global_seed) {
    ExperimentConfig::ModelSpec spec;
    require_keys(doc, context,
                 {"name", "label", "lags", "hidden_size", "epochs", "learning_rate",
                  "sequence_length", "batch_size", "seed", "loss"},
                 {"name"});
    spec.kind = get_as<std::string>(doc, "name", context);
    spec.label = get_or<std::string>(doc, "label", "", context);
    if (spec.kind == "martingale" || spec.kind == "glm") {
        require_keys(doc, context, {"name", "label"}, {"name"});
    } else if (spec.kind == "linear") {
        require_keys(doc, context, {"name", "label", "lags"}, {"name"});
        spec.lags = get_or<std::vector<int>>(doc, "lags", {1}, context);
        models::LagSpec{spec.lags}.validate();
    } else if (spec.kind == "lstm") {
        spec.lstm.hidden_size = get_or<int>(doc, "hidden_size", 10, context);
        spec.lstm.epochs = get_or<int>(doc, "epochs", 100, context);
        spec.lstm.learning_rate = get_or<double>(doc, "learning_rate", 1e-3, context);
        spec.lstm.sequence_length = get_or<int>(doc, "sequence_length", 30, context);
        spec.lstm.batch_size = get_or<int>(doc, "batch_size", 32, context);
        spec.lstm.seed = get_or<std::uint64_t>(doc, "seed", global_seed, context);
        spec.lstm.loss = models::loss_from_name(
            get_or<std::string>(doc, "loss", "mse", context));
        spec.lstm.validate();
    } else {
        throw ConfigError(context + ".name: want martingale|linear|glm|lstm");
    }
    return spec;
}

ExperimentConfig::EnsembleSpec parse_ensemble(const nlohmann::json& doc,
                                              const std::string& context) {
    ExperimentConfig::EnsembleSpec spec;
    require_keys(doc, context,
                 {"eta", "loss", "loss_cap", "target_window", "stability_coeff"}, {});
    spec.eta = get_or<double>(doc, "eta", 0.0, context);
    if (doc.contains("loss_cap")) {
        spec.loss_cap = get_as<double>(doc, "loss_cap", context);
    }
    spec.loss = models::loss_from_name(
        get_or<std::string>(doc, "loss", "squared", context));
    spec.target_window = get_or<std::size_t>(doc, "target_window", 0, context);
    spec.stability_coeff = get_or<double>(doc, "stability_coeff", 12.0, context);
    return spec;
}

ExperimentConfig::StrategySpec parse_strategy(const nlohmann::json& doc,
                                              const std::string& context,
                                              std::uint64_t global_seed) {
    ExperimentConfig::StrategySpec spec;
    require_keys(doc, context,
                 {"lookback", "threshold", "position_size", "initial_cash",
                  "fee_per_trade", "train_fraction", "forecaster"},
                 {});
    spec.lookback = get_or<std::size_t>(doc, "lookback", 20, context);
    spec.entry_threshold = get_or<double>(doc, "threshold", 0.05, context);
    spec.position_size = get_or<double>(doc, "position_size", 1.0, context);
    spec.initial_cash = get_or<double>(doc, "initial_cash", 10000.0, context);
    spec.fee_per_trade = get_or<double>(doc, "fee_per_trade", 0.0, context);
    spec.train_fraction = get_or<double>(doc, "train_fraction", 0.0, context);
    if (doc.contains("forecaster")) {
        spec.forecaster =
            parse_model(doc.at("forecaster"), context + ".forecaster", global_seed);
    }
    return spec;
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    return parse(doc, path.string());
}

ExperimentConfig ExperimentConfig::parse(const nlohmann::json& doc,
                                         const std::string& context) {
    require_keys(doc, context,
                 {"version", "seed", "output_dir", "data", "transform", "split",
                  "models", "ensemble", "strategy", "jobs"},
                 {"version", "data"});
    const int version = get_as<int>(doc, "version", context);
    if (version != kFormatVersion) {
        throw ConfigError(context + ": unsupported config version " +
                          std::to_string(version));
    }

    ExperimentConfig config;
    config.seed = get_or<std::uint64_t>(doc, "seed", 0, context);
    config.output_dir = get_or<std::string>(doc, "output_dir", "out", context);
    config.data = parse_data(doc.at("data"), context + ".data");
    config.transform = transform_from_name(
        get_or<std::string>(doc, "transform", "close", context));
    if (doc.contains("split")) {
        config.split = parse_split(doc.at("split"), context + ".split");
    }
    if (doc.contains("models")) {
        if (!doc.at("models").is_array() || doc.at("models").empty()) {
            throw ConfigError(context + ".models: expected a nonempty array");
        }
        std::size_t index = 0;
        for (const auto& entry : doc.at("models")) {
            config.models.push_back(parse_model(
                entry, context + ".models[" + std::to_string(index) + "]",
                config.seed));
            ++index;
        }
    }
    if (doc.contains("ensemble")) {
        config.ensemble = parse_ensemble(doc.at("ensemble"), context + ".ensemble");
    }
    if (doc.contains("strategy")) {
        config.strategy =
            parse_strategy(doc.at("strategy"), context + ".strategy", config.seed);
    }
    config.jobs = get_or<int>(doc, "jobs", 1, context);
    if (config.jobs < 1) {
        throw ConfigError(context + ".jobs: must be >= 1");
    }
    return config;
}

models::ForecasterPtr make_forecaster(const ExperimentConfig::ModelSpec& spec,
                                      std::uint64_t global_seed) {
    if (spec.kind == "martingale") {
        return std::make_shared<models::MartingaleForecaster>();
    }
    if (spec.kind == "linear") {
        return std::make_shared<models::LaggedLinearForecaster>(
            models::LagSpec{spec.lags});
    }
    if (spec.kind == "glm") {
        return std::make_shared<models::GlmForecaster>();
    }
    if (spec.kind == "lstm") {
        models::TrainConfig train = spec.lstm;
        if (train.seed == 0) {
            train.seed = global_seed;
        }
        return std::make_shared<models::LstmForecaster>(train);
    }
    throw ConfigError("unknown model kind '" + spec.kind + "'");
}

std::string model_label(const ExperimentConfig::ModelSpec& spec,
                        std::uint64_t global_seed) {
    if (!spec.label.empty()) {
        return spec.label;
    }
    return make_forecaster(spec, global_seed)->name();
}

} // namespace fcast::cli
