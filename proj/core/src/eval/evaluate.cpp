#include "fcast/eval/evaluate.hpp"
#include "fcast/core/errors.hpp"
#include "fcast/eval/metrics.hpp"
#include "fcast/models/martingale.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace fcast::eval {

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

nlohmann::json metrics_to_json(const ModelMetrics& m) {
    return {{"rmse", m.rmse}, {"mae", m.mae}, {"n_predictions", m.n_predictions}};
}

ModelMetrics metrics_from_json(const nlohmann::json& doc) {
    ModelMetrics m;
    m.rmse = doc.at("rmse").get<double>();
    m.mae = doc.at("mae").get<double>();
    m.n_predictions = doc.at("n_predictions").get<std::size_t>();
    return m;
}

} // namespace

nlohmann::json EvalReport::to_json() const {
    nlohmann::json models_json = nlohmann::json::array();
    for (const auto& [name, metrics] : models) {
        nlohmann::json entry = metrics_to_json(metrics);
        entry["name"] = name;
        models_json.push_back(std::move(entry));
    }
    return {{"format_version", 1},
            {"series", series_id},
            {"transform", transform},
            {"split", split_label},
            {"martingale", metrics_to_json(martingale)},
            {"models", std::move(models_json)}};
}

EvalReport EvalReport::from_json(const nlohmann::json& doc) {
    EvalReport report;
    report.series_id = doc.at("series").get<std::string>();
    report.transform = doc.at("transform").get<std::string>();
    report.split_label = doc.at("split").get<std::string>();
    report.martingale = metrics_from_json(doc.at("martingale"));
    for (const auto& entry : doc.at("models")) {
        report.models.emplace_back(entry.at("name").get<std::string>(),
                                   metrics_from_json(entry));
    }
    return report;
}

EvalRun evaluate_run(const std::vector<NamedForecaster>& models,
                     const ValueSeries& series, const Fold& fold,
                     std::string series_id, std::string transform_label) {
    if (fold.train_end > series.size() || fold.test_end > series.size() ||
        fold.train_begin >= fold.train_end || fold.test_begin >= fold.test_end ||
        fold.test_begin < fold.train_end) {
        throw ConfigError("evaluate: fold ranges do not fit the series");
    }
    for (const auto& m : models) {
        if (!m.model) {
            throw ConfigError("evaluate: null model '" + m.name + "'");
        }
    }

    const ValueSeries train = series.slice(fold.train_begin, fold.train_end);
    models::MartingaleForecaster martingale;

    std::size_t min_start = 1;
    for (const auto& m : models) {
        try {
            m.model->fit(train);
        } catch (const Error& e) {
            throw ModelError("evaluate: model '" + m.name + "' failed to fit: " +
                             e.what());
        }
        min_start = std::max(min_start, m.model->min_history());
    }

    // Identical index set for every model: push the first test index forward
    // until all lags/windows resolve.
    const std::size_t begin = std::max(fold.test_begin, min_start);
    if (begin >= fold.test_end) {
        throw ConfigError("evaluate: no test index has enough history for all models");
    }

    EvalRun run;
    run.predictions.emplace_back("martingale", std::vector<double>{});
    for (const auto& m : models) {
        run.predictions.emplace_back(m.name, std::vector<double>{});
    }

    for (std::size_t t = begin; t < fold.test_end; ++t) {
        const ValueSeries history = series.slice(0, t);
        run.dates.push_back(series.date(t));
        run.truths.push_back(series.value(t));
        run.predictions[0].second.push_back(martingale.predict_next(history));
        for (std::size_t m = 0; m < models.size(); ++m) {
            try {
                run.predictions[m + 1].second.push_back(
                    models[m].model->predict_next(history));
            } catch (const Error& e) {
                throw ModelError("evaluate: model '" + models[m].name +
                                 "' failed at test index " + std::to_string(t) +
                                 " (" + series.date(t).to_string() + "): " + e.what());
            }
        }
    }

    run.report.series_id = std::move(series_id);
    run.report.transform = std::move(transform_label);
    run.report.split_label = fold.label;
    run.report.martingale =
        ModelMetrics{rmse(run.predictions[0].second, run.truths),
                     mae(run.predictions[0].second, run.truths), run.truths.size()};
    for (std::size_t m = 0; m < models.size(); ++m) {
        const auto& preds = run.predictions[m + 1].second;
        run.report.models.emplace_back(
            models[m].name, ModelMetrics{rmse(preds, run.truths),
                                         mae(preds, run.truths), run.truths.size()});
    }
    return run;
}

EvalReport evaluate(const std::vector<NamedForecaster>& models,
                    const ValueSeries& series, const Fold& fold,
                    std::string series_id, std::string transform_label) {
    return evaluate_run(models, series, fold, std::move(series_id),
                        std::move(transform_label))
        .report;
}

std::string render_table(const EvalReport& report) {
    // One row per model, its errors next to the martingale's L1/L2 losses.
    std::vector<std::array<std::string, 6>> rows;
    rows.push_back({"model", "rmse", "rmse: martingale", "mean L1-loss",
                    "mean L1-loss: martingale", "n"});
    const auto add = [&](const std::string& name, const ModelMetrics& m) {
        rows.push_back({name, fixed6(m.rmse), fixed6(report.martingale.rmse),
                        fixed6(m.mae), fixed6(report.martingale.mae),
                        std::to_string(m.n_predictions)});
    };
    add("martingale", report.martingale);
    for (const auto& [name, metrics] : report.models) {
        add(name, metrics);
    }

    std::array<std::size_t, 6> width{};
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }

    std::ostringstream out;
    out << report.series_id << " | transform=" << report.transform
        << " | split=" << report.split_label << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) {
                out << std::string(width[c] - row[c].size() + 2, ' ');
            }
        }
        out << "\n";
    }
    return out.str();
}

void write_plot_csv(const EvalRun& run, std::ostream& out) {
    out << "date,truth";
    for (const auto& [name, preds] : run.predictions) {
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t i = 0; i < run.truths.size(); ++i) {
        out << run.dates[i].to_string() << ',' << shortest(run.truths[i]);
        for (const auto& [name, preds] : run.predictions) {
            out << ',' << shortest(preds[i]);
        }
        out << '\n';
    }
}

} // namespace fcast::eval
