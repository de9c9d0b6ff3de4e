#include "app.hpp"
#include "config.hpp"

#include "fcast/backtest/mean_reversion.hpp"
#include "fcast/core/errors.hpp"
#include "fcast/eval/evaluate.hpp"
#include "fcast/eval/metrics.hpp"
#include "fcast/ingest/alphavantage.hpp"
#include "fcast/ingest/csv.hpp"
#include "fcast/online/discrepancy.hpp"
#include "fcast/online/ensemble.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fcast::cli {

namespace {

namespace fs = std::filesystem;

std::string shortest(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw ConfigError("cannot open for writing: " + tmp.string());
        }
        out << content;
        if (!out.good()) {
            throw ConfigError("write failed: " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string sanitize(const std::string& label) {
    std::string out;
    for (char c : label) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    }
    return out;
}

struct LoadedData {
    PriceSeries prices;
    std::string series_id;
};

/// Regime-change fixture: the drift keeps its magnitude but flips sign at
/// the midpoint. Both halves are independently seeded and stitched.
ValueSeries generate_with_flip(const GeneratorSpec& spec) {
    const std::size_t half = (spec.length + 1) / 2;
    GeneratorSpec head = spec;
    head.length = half;
    const ValueSeries first = generate(head);

    GeneratorSpec tail = spec;
    tail.drift = -spec.drift;
    tail.length = spec.length - half + 1;
    tail.initial = first.back();
    tail.seed = spec.seed + 0x517cc1b7;
    const ValueSeries second = generate(tail);

    std::vector<Date> dates(first.dates().begin(), first.dates().end());
    std::vector<double> values(first.values().begin(), first.values().end());
    Date day = dates.back();
    for (std::size_t i = 1; i < second.size(); ++i) {
        day = day.next_weekday();
        dates.push_back(day);
        values.push_back(second.value(i));
    }
    return ValueSeries(std::move(dates), std::move(values));
}

LoadedData load_prices(const ExperimentConfig& config) {
    switch (config.data.kind) {
    case ExperimentConfig::DataKind::Csv: {
        PriceSeries series = ingest::read_csv(config.data.csv_path);
        std::string id = config.data.symbol.empty()
                             ? config.data.csv_path.stem().string()
                             : config.data.symbol;
        return {std::move(series), std::move(id)};
    }
    case ExperimentConfig::DataKind::Symbol: {
        auto source = ingest::DataSourceConfig::from_environment(
            config.data.symbol, config.data.cache_dir);
        auto result = ingest::fetch_daily(source);
        return {std::move(result.series), config.data.symbol};
    }
    case ExperimentConfig::DataKind::Generator: {
        const auto values = config.data.drift_flip
                                ? generate_with_flip(config.data.generator)
                                : generate(config.data.generator);
        return {to_price_series(values, config.data.symbol), config.data.symbol};
    }
    }
    throw ConfigError("unknown data kind");
}

void warn_ohlc(const PriceSeries& series) {
    for (const auto& message : series.warnings()) {
        std::cerr << "warning: " << message << "\n";
    }
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const ExperimentConfig& config) {
    if (config.models.empty()) {
        throw ConfigError("evaluate: config needs a nonempty models array");
    }
    const LoadedData data = load_prices(config);
    warn_ohlc(data.prices);
    const ValueSeries series = apply_transform(data.prices, config.transform);
    const auto folds = eval::split(series, config.split);

    const auto evaluate_fold = [&](const eval::Fold& fold) {
        std::vector<eval::NamedForecaster> models;
        for (const auto& spec : config.models) {
            models.push_back(
                {model_label(spec, config.seed), make_forecaster(spec, config.seed)});
        }
        return eval::evaluate_run(models, series, fold, data.series_id,
                                  transform_name(config.transform));
    };

    std::vector<eval::EvalRun> runs(folds.size());
    const std::size_t workers =
        std::min<std::size_t>(std::max(config.jobs, 1), folds.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < folds.size(); ++i) {
            runs[i] = evaluate_fold(folds[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= folds.size()) {
                        return;
                    }
                    try {
                        runs[i] = evaluate_fold(folds[i]);
                    } catch (...) {
                        std::scoped_lock lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    nlohmann::json folds_json = nlohmann::json::array();
    std::ostringstream tables;
    for (const auto& run : runs) {
        folds_json.push_back(run.report.to_json());
        tables << eval::render_table(run.report) << "\n";
    }
    const nlohmann::json report{{"format_version", 1},
                                {"series", data.series_id},
                                {"transform", transform_name(config.transform)},
                                {"split", eval::describe(config.split)},
                                {"seed", config.seed},
                                {"folds", std::move(folds_json)}};

    atomic_write(config.output_dir / "report.json", report.dump(2) + "\n");
    atomic_write(config.output_dir / "report.txt", tables.str());
    for (const auto& run : runs) {
        std::ostringstream csv;
        eval::write_plot_csv(run, csv);
        atomic_write(config.output_dir /
                         ("plot_" + sanitize(run.report.split_label) + ".csv"),
                     csv.str());
    }

    std::cout << tables.str();
    std::cout << "wrote " << (config.output_dir / "report.json").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// ensemble

int cmd_ensemble(const ExperimentConfig& config) {
    if (config.models.empty()) {
        throw ConfigError("ensemble: config needs a nonempty models array");
    }
    const LoadedData data = load_prices(config);
    warn_ohlc(data.prices);
    const ValueSeries series = apply_transform(data.prices, config.transform);
    const auto folds = eval::split(series, config.split);
    const eval::Fold fold = folds.front(); // online pass runs on the first fold

    online::ExpertSet experts;
    for (const auto& spec : config.models) {
        experts.names.push_back(model_label(spec, config.seed));
        experts.experts.push_back(make_forecaster(spec, config.seed));
    }
    experts.validate();

    const ValueSeries train = series.slice(fold.train_begin, fold.train_end);
    std::size_t min_start = 1;
    for (std::size_t i = 0; i < experts.size(); ++i) {
        experts.experts[i]->fit(train);
        min_start = std::max(min_start, experts.experts[i]->min_history());
    }
    const std::size_t begin = std::max(fold.test_begin, min_start);
    if (begin >= fold.test_end) {
        throw ConfigError("ensemble: no test index has enough history");
    }
    const std::size_t rounds = fold.test_end - begin;

    online::EnsembleConfig ens;
    ens.loss = config.ensemble.loss;
    ens.eta = config.ensemble.eta > 0.0
                  ? config.ensemble.eta
                  : online::regret_optimal_eta(experts.size(), rounds);
    ens.loss_cap = config.ensemble.loss_cap
                       ? *config.ensemble.loss_cap
                       : online::suggested_loss_cap(train, ens.loss);
    online::EnsembleState state(experts.size(), ens);

    std::ostringstream trace;
    trace << "round,date,outcome,ensemble_prediction,discrepancy";
    for (const auto& name : experts.names) {
        const std::string column = sanitize(name);
        trace << ",pred_" << column << ",loss_" << column << ",weight_" << column;
    }
    trace << "\n";

    std::vector<std::vector<double>> expert_predictions(experts.size());
    std::vector<double> outcomes;
    for (std::size_t t = begin; t < fold.test_end; ++t) {
        const ValueSeries history = series.slice(0, t);
        std::vector<double> predictions(experts.size());
        for (std::size_t i = 0; i < experts.size(); ++i) {
            predictions[i] = experts.experts[i]->predict_next(history);
            expert_predictions[i].push_back(predictions[i]);
        }
        const std::vector<double> played = state.weights();
        const double mixed = online::ensemble_step(state, predictions, series.value(t));
        outcomes.push_back(series.value(t));

        // Nonstationarity monitor: recent-window mean vs the whole pass.
        const std::size_t r = state.rounds();
        std::size_t window = config.ensemble.target_window > 0
                                 ? std::min(config.ensemble.target_window, r)
                                 : std::max<std::size_t>(1, r / 2);
        const auto weights = online::DiscrepancyWeights::suffix_uniform(r, r, window);
        const double disc = online::estimate_discrepancy(state.loss_history(), weights);

        trace << r << ',' << series.date(t).to_string() << ','
              << shortest(series.value(t)) << ',' << shortest(mixed) << ','
              << shortest(disc);
        const auto& losses = state.loss_history().back();
        for (std::size_t i = 0; i < experts.size(); ++i) {
            trace << ',' << shortest(predictions[i]) << ',' << shortest(losses[i])
                  << ',' << shortest(played[i]);
        }
        trace << "\n";
    }

    online::OtbConfig otb;
    otb.target_window = config.ensemble.target_window;
    otb.stability_coeff = config.ensemble.stability_coeff;
    const auto selection = online::select_otb_weights(state, otb);

    // Ensemble and OTB-mixture errors over the pass, vs each expert's.
    std::vector<double> mixture_predictions;
    std::vector<double> otb_predictions;
    for (std::size_t r = 0; r < rounds; ++r) {
        double otb_mix = 0.0;
        for (std::size_t i = 0; i < experts.size(); ++i) {
            otb_mix += selection.expert_weights[i] * expert_predictions[i][r];
        }
        otb_predictions.push_back(otb_mix);
        double played_mix = 0.0;
        for (std::size_t i = 0; i < experts.size(); ++i) {
            played_mix += state.weight_history()[r][i] * expert_predictions[i][r];
        }
        mixture_predictions.push_back(played_mix);
    }

    nlohmann::json experts_json = nlohmann::json::array();
    for (std::size_t i = 0; i < experts.size(); ++i) {
        experts_json.push_back(
            {{"name", experts.names[i]},
             {"rmse", eval::rmse(expert_predictions[i], outcomes)},
             {"mae", eval::mae(expert_predictions[i], outcomes)},
             {"cumulative_loss", state.cumulative_losses()[i]},
             {"final_weight", state.weights()[i]},
             {"otb_weight", selection.expert_weights[i]}});
    }
    const nlohmann::json report{
        {"format_version", 1},
        {"series", data.series_id},
        {"transform", transform_name(config.transform)},
        {"split", eval::describe(config.split)},
        {"seed", config.seed},
        {"rounds", rounds},
        {"eta", ens.eta},
        {"loss", models::loss_name(ens.loss)},
        {"loss_cap", ens.loss_cap},
        {"regret", online::regret(state)},
        {"flagged_rounds", state.flagged_rounds().size()},
        {"ensemble", {{"rmse", eval::rmse(mixture_predictions, outcomes)},
                      {"mae", eval::mae(mixture_predictions, outcomes)},
                      {"n_predictions", rounds}}},
        {"otb", {{"selected_window", selection.window},
                 {"candidate_windows", selection.candidate_windows},
                 {"candidate_scores", selection.candidate_scores},
                 {"rmse", eval::rmse(otb_predictions, outcomes)},
                 {"mae", eval::mae(otb_predictions, outcomes)}}},
        {"experts", std::move(experts_json)}};

    atomic_write(config.output_dir / "trace.csv", trace.str());
    atomic_write(config.output_dir / "ensemble_report.json", report.dump(2) + "\n");
    std::cout << "rounds " << rounds << ", regret "
              << shortest(online::regret(state)) << ", otb window "
              << selection.window << "\n";
    std::cout << "wrote " << (config.output_dir / "ensemble_report.json").string()
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// backtest

int cmd_backtest(const ExperimentConfig& config) {
    if (config.transform != Transform::Close) {
        throw ConfigError("backtest: runs on raw prices; drop the transform key");
    }
    const LoadedData data = load_prices(config);
    warn_ohlc(data.prices);

    const auto& strat = config.strategy;
    auto forecaster = make_forecaster(strat.forecaster, config.seed);

    PriceSeries bars = data.prices;
    if (strat.train_fraction > 0.0) {
        if (!(strat.train_fraction < 1.0)) {
            throw ConfigError("backtest: train_fraction must lie in (0, 1)");
        }
        const std::size_t train = static_cast<std::size_t>(
            std::floor(strat.train_fraction * double(data.prices.size())));
        if (train < 2 || train >= data.prices.size()) {
            throw ConfigError("backtest: series too short for train_fraction");
        }
        forecaster->fit(closes(data.prices).prefix(train));
        std::vector<Bar> suffix(data.prices.bars().begin() + train,
                                data.prices.bars().end());
        bars = PriceSeries(data.prices.symbol(), std::move(suffix));
    }

    backtest::StrategyConfig strategy;
    strategy.lookback = strat.lookback;
    strategy.entry_threshold = strat.entry_threshold;
    strategy.position_size = strat.position_size;
    strategy.initial_cash = strat.initial_cash;
    strategy.fee_per_trade = strat.fee_per_trade;

    const auto ledger = backtest::run_mean_reversion(bars, strategy, *forecaster);

    std::ostringstream csv;
    ledger.write_csv(csv);
    atomic_write(config.output_dir / "ledger.csv", csv.str());
    atomic_write(config.output_dir / "ledger.json", ledger.to_json().dump(2) + "\n");

    std::cout << "trades " << ledger.trades.size() << ", skipped "
              << ledger.skipped_insufficient_cash << ", final P&L "
              << shortest(ledger.final_pnl) << "\n";
    std::cout << "wrote " << (config.output_dir / "ledger.json").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const ExperimentConfig& config) {
    if (config.data.kind != ExperimentConfig::DataKind::Generator) {
        throw ConfigError("simulate: config data.kind must be 'generator'");
    }
    const auto values = config.data.drift_flip
                            ? generate_with_flip(config.data.generator)
                            : generate(config.data.generator);
    if (!values.all_positive()) {
        std::cerr << "warning: additive walk crossed zero; series kept as-is\n";
    }
    const auto series = to_price_series(values, config.data.symbol);
    const fs::path out = config.output_dir / (config.data.symbol + ".csv");
    fs::create_directories(config.output_dir);
    ingest::write_csv(series, out);
    std::cout << series.size() << " rows, " << series.front().date.to_string()
              << ".." << series.back().date.to_string() << "\n";
    std::cout << "wrote " << out.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fetch

int cmd_fetch(const std::string& symbol, const fs::path& cache_dir,
              const fs::path& csv_out) {
    auto source = ingest::DataSourceConfig::from_environment(symbol, cache_dir);
    const auto result = ingest::fetch_daily(source);
    warn_ohlc(result.series);
    std::cout << result.series.size() << " rows, "
              << result.series.front().date.to_string() << ".."
              << result.series.back().date.to_string()
              << (result.from_cache ? " (cache hit)" : " (fetched)") << "\n";
    std::cout << "cache file " << result.cache_file.string() << "\n";
    if (!csv_out.empty()) {
        fs::create_directories(csv_out.parent_path().empty()
                                   ? "."
                                   : csv_out.parent_path());
        ingest::write_csv(result.series, csv_out);
        std::cout << "wrote " << csv_out.string() << "\n";
    }
    return kExitOk;
}

ExperimentConfig load_config(const std::string& config_path,
                             const std::string& output_dir, int jobs) {
    if (config_path.empty()) {
        throw ConfigError("missing --config");
    }
    ExperimentConfig config = ExperimentConfig::load(config_path);
    if (!output_dir.empty()) {
        config.output_dir = output_dir;
    }
    if (jobs > 0) {
        config.jobs = jobs;
    }
    return config;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"stock-price forecasting benchmarks against the martingale"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int jobs = 0;
    app.add_option("--config", config_path, "experiment config (JSON)")
        ->configurable(false);
    app.add_option("--output-dir", output_dir, "override the config output_dir");
    app.add_option("--jobs", jobs, "parallel folds (default from config)");
    app.fallthrough();

    auto* fetch = app.add_subcommand("fetch", "download and cache daily bars");
    std::string symbol;
    std::string cache_dir = ".cache";
    std::string fetch_csv;
    fetch->add_option("--symbol", symbol, "ticker symbol")->required();
    fetch->add_option("--cache-dir", cache_dir, "cache directory");
    fetch->add_option("--csv", fetch_csv, "also write the series as CSV");

    auto* simulate = app.add_subcommand("simulate", "write a synthetic random walk");
    auto* evaluate = app.add_subcommand("evaluate", "walk-forward model comparison");
    auto* ensemble = app.add_subcommand("ensemble", "online expert mixture + OTB");
    auto* backtest = app.add_subcommand("backtest", "mean-reversion strategy P&L");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (fetch->parsed()) {
            return cmd_fetch(symbol, cache_dir, fetch_csv);
        }
        const ExperimentConfig config = load_config(config_path, output_dir, jobs);
        if (simulate->parsed()) {
            return cmd_simulate(config);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(config);
        }
        if (ensemble->parsed()) {
            return cmd_ensemble(config);
        }
        if (backtest->parsed()) {
            return cmd_backtest(config);
        }
        throw ConfigError("no subcommand");
    } catch (const ThrottledError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const EmptyDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("fcast");
    for (const auto& arg : args) {
        argv.push_back(arg.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace fcast::cli
