#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "app.hpp"
#include "config.hpp"

#include "fcast/core/errors.hpp"
#include "fcast/ingest/alphavantage.hpp"
#include "fcast/ingest/csv.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace fcast;
using namespace fcast::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() / ("fcast-cli-" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

fs::path test_data(const std::string& name) {
    return fs::path(FCAST_TEST_DATA_DIR) / name;
}

std::string utc_today() {
    const auto now = std::chrono::system_clock::now();
    const auto days = std::chrono::floor<std::chrono::days>(now);
    return Date::from_serial(int(days.time_since_epoch().count())).to_string();
}

nlohmann::json martingale_walk_config(std::uint64_t seed, std::size_t length) {
    return {{"version", 1},
            {"seed", 7},
            {"data",
             {{"kind", "generator"},
              {"walk", "geometric"},
              {"martingale", true},
              {"volatility", 0.01},
              {"initial", 100.0},
              {"length", length},
              {"seed", seed},
              {"symbol", "SYN"}}},
            {"split", {{"kind", "fraction"}, {"train_fraction", 0.7}}},
            {"models", nlohmann::json::array({{{"name", "martingale"}},
                                              {{"name", "linear"},
                                               {"lags", {1}}}})}};
}

} // namespace

TEST_CASE("config schema rejects unknown keys and bad versions") {
    TempDir tmp;
    const fs::path file = tmp.path / "bad.json";

    write_file(file, R"({"version": 1, "data": {"kind": "csv", "path": "x.csv"},
                         "typo_key": true})");
    CHECK(run({"evaluate", "--config", file.string()}) == kExitConfig);

    write_file(file, R"({"version": 99, "data": {"kind": "csv", "path": "x.csv"}})");
    CHECK(run({"evaluate", "--config", file.string()}) == kExitConfig);

    write_file(file, "not json at all");
    CHECK(run({"evaluate", "--config", file.string()}) == kExitConfig);
}

TEST_CASE("missing data file is a data error (exit 3)") {
    TempDir tmp;
    const fs::path file = tmp.path / "exp.json";
    nlohmann::json config{{"version", 1},
                          {"data", {{"kind", "csv"}, {"path", (tmp.path / "absent.csv").string()}}},
                          {"models", nlohmann::json::array({{{"name", "martingale"}}})}};
    write_file(file, config.dump());
    CHECK(run({"evaluate", "--config", file.string()}) == kExitData);
}

TEST_CASE("model failures exit with code 4") {
    TempDir tmp;
    // 20 rows is far too short for a sequence_length-30 LSTM.
    auto config = martingale_walk_config(3, 20);
    config["models"] = nlohmann::json::array({{{"name", "lstm"}}});
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());
    CHECK(run({"evaluate", "--config", file.string(),
               "--output-dir", (tmp.path / "out").string()}) == kExitModel);
}

TEST_CASE("evaluate on a CSV fixture produces martingale + linear rows") {
    TempDir tmp;

    // Build a small CSV from a generated walk via the simulate command.
    nlohmann::json sim{{"version", 1},
                       {"data",
                        {{"kind", "generator"},
                         {"walk", "geometric"},
                         {"martingale", true},
                         {"volatility", 0.015},
                         {"initial", 250.0},
                         {"length", 240},
                         {"seed", 99},
                         {"symbol", "FIX"}}}};
    const fs::path sim_file = tmp.path / "sim.json";
    write_file(sim_file, sim.dump());
    REQUIRE(run({"simulate", "--config", sim_file.string(),
                 "--output-dir", tmp.path.string()}) == kExitOk);
    REQUIRE(fs::exists(tmp.path / "FIX.csv"));

    nlohmann::json config{
        {"version", 1},
        {"data", {{"kind", "csv"}, {"path", (tmp.path / "FIX.csv").string()}}},
        {"transform", "close"},
        {"split", {{"kind", "fraction"}, {"train_fraction", 0.7}}},
        {"models", nlohmann::json::array({{{"name", "linear"}, {"lags", {1}}}})}};
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());

    const fs::path out = tmp.path / "out";
    REQUIRE(run({"evaluate", "--config", file.string(), "--output-dir",
                 out.string()}) == kExitOk);

    const auto report = nlohmann::json::parse(read_file(out / "report.json"));
    CHECK(report.at("series") == "FIX");
    REQUIRE(report.at("folds").size() == 1);
    const auto& fold = report.at("folds").at(0);
    const auto n_mart = fold.at("martingale").at("n_predictions").get<std::size_t>();
    const auto& models = fold.at("models");
    REQUIRE(models.size() == 1);
    CHECK(models.at(0).at("name") == "linear{1}");
    CHECK(models.at(0).at("n_predictions").get<std::size_t>() == n_mart);

    CHECK(fs::exists(out / "report.txt"));
    const std::string table = read_file(out / "report.txt");
    CHECK(table.find("martingale") != std::string::npos);
    CHECK(table.find("linear{1}") != std::string::npos);
}

TEST_CASE("the synthetic-martingale recipe keeps fitted models near the baseline") {
    TempDir tmp;
    const auto config = martingale_walk_config(1234, 800);
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());
    const fs::path out = tmp.path / "out";
    REQUIRE(run({"evaluate", "--config", file.string(), "--output-dir",
                 out.string()}) == kExitOk);

    const auto report = nlohmann::json::parse(read_file(out / "report.json"));
    const auto& fold = report.at("folds").at(0);
    const double martingale_rmse = fold.at("martingale").at("rmse").get<double>();
    for (const auto& model : fold.at("models")) {
        if (model.at("name") == "martingale") {
            continue;
        }
        CHECK(model.at("rmse").get<double>() >= 0.98 * martingale_rmse);
    }
}

TEST_CASE("running the same experiment twice is byte-identical") {
    TempDir tmp;
    auto config = martingale_walk_config(55, 400);
    config["models"].push_back({{"name", "lstm"},
                                {"hidden_size", 3},
                                {"epochs", 4},
                                {"sequence_length", 8},
                                {"seed", 9}});
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());

    const fs::path out_a = tmp.path / "a";
    const fs::path out_b = tmp.path / "b";
    REQUIRE(run({"evaluate", "--config", file.string(), "--output-dir",
                 out_a.string()}) == kExitOk);
    REQUIRE(run({"evaluate", "--config", file.string(), "--output-dir",
                 out_b.string()}) == kExitOk);

    CHECK(read_file(out_a / "report.json") == read_file(out_b / "report.json"));
    CHECK(read_file(out_a / "report.txt") == read_file(out_b / "report.txt"));
    for (const auto& entry : fs::directory_iterator(out_a)) {
        const fs::path name = entry.path().filename();
        CHECK(read_file(out_a / name) == read_file(out_b / name));
    }
}

TEST_CASE("parallel folds produce the same bytes as sequential") {
    TempDir tmp;
    auto config = martingale_walk_config(21, 700);
    config["split"] = {{"kind", "walk-forward"}, {"train_len", 200}, {"step", 100}};
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());

    const fs::path seq = tmp.path / "seq";
    const fs::path par = tmp.path / "par";
    REQUIRE(run({"evaluate", "--config", file.string(), "--output-dir",
                 seq.string(), "--jobs", "1"}) == kExitOk);
    REQUIRE(run({"evaluate", "--config", file.string(), "--output-dir",
                 par.string(), "--jobs", "4"}) == kExitOk);
    CHECK(read_file(seq / "report.json") == read_file(par / "report.json"));
}

TEST_CASE("single-expert ensemble equals that expert") {
    TempDir tmp;
    auto config = martingale_walk_config(31, 500);
    config["models"] = nlohmann::json::array({{{"name", "linear"}, {"lags", {1}}}});
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());

    const fs::path out = tmp.path / "out";
    REQUIRE(run({"ensemble", "--config", file.string(), "--output-dir",
                 out.string()}) == kExitOk);
    const auto report = nlohmann::json::parse(read_file(out / "ensemble_report.json"));
    REQUIRE(report.at("experts").size() == 1);
    CHECK(report.at("ensemble").at("rmse").get<double>() ==
          report.at("experts").at(0).at("rmse").get<double>());
    CHECK(report.at("ensemble").at("mae").get<double>() ==
          report.at("experts").at(0).at("mae").get<double>());
    CHECK(report.at("regret").get<double>() == 0.0);
}

TEST_CASE("regime-change config puts the discrepancy peak in the second half") {
    TempDir tmp;
    nlohmann::json config{
        {"version", 1},
        {"seed", 5},
        {"data",
         {{"kind", "generator"},
          {"walk", "geometric"},
          {"drift", 0.004},
          {"drift_flip", true},
          {"volatility", 0.002},
          {"initial", 100.0},
          {"length", 600},
          {"seed", 77},
          {"symbol", "FLIP"}}},
        {"split", {{"kind", "fraction"}, {"train_fraction", 0.3}}},
        {"models", nlohmann::json::array({{{"name", "martingale"}},
                                          {{"name", "glm"}},
                                          {{"name", "linear"}, {"lags", {1}}}})}};
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());

    const fs::path out = tmp.path / "out";
    REQUIRE(run({"ensemble", "--config", file.string(), "--output-dir",
                 out.string()}) == kExitOk);

    // Scan the trace: the discrepancy column must peak after the midpoint.
    std::ifstream trace(out / "trace.csv");
    std::string line;
    std::getline(trace, line); // header
    REQUIRE(line.rfind("round,date,outcome,ensemble_prediction,discrepancy", 0) == 0);
    std::vector<double> disc;
    while (std::getline(trace, line)) {
        std::istringstream row(line);
        std::string field;
        for (int c = 0; c <= 4; ++c) {
            std::getline(row, field, ',');
        }
        disc.push_back(std::stod(field));
    }
    REQUIRE(disc.size() > 100);
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < disc.size(); ++i) {
        if (disc[i] > disc[argmax]) {
            argmax = i;
        }
    }
    CHECK(argmax > disc.size() / 2);
}

TEST_CASE("constant-price backtest config trades nothing") {
    TempDir tmp;
    nlohmann::json config{
        {"version", 1},
        {"data",
         {{"kind", "generator"},
          {"walk", "geometric"},
          {"drift", 0.0},
          {"volatility", 1e-9},
          {"initial", 100.0},
          {"length", 120},
          {"seed", 4},
          {"symbol", "CONST"}}},
        {"strategy",
         {{"lookback", 10}, {"threshold", 0.05}, {"position_size", 1.0}}}};
    const fs::path file = tmp.path / "exp.json";
    write_file(file, config.dump());

    const fs::path out = tmp.path / "out";
    REQUIRE(run({"backtest", "--config", file.string(), "--output-dir",
                 out.string()}) == kExitOk);
    const auto ledger = nlohmann::json::parse(read_file(out / "ledger.json"));
    CHECK(ledger.at("trades").empty());
    CHECK(ledger.at("final_pnl").get<double>() == 0.0);
}

TEST_CASE("fetch: cache hit works offline and exits 0") {
    TempDir tmp;
    const std::string fixture = read_file(test_data("alphavantage_daily.json"));
    write_file(tmp.path / ("SPX-" + utc_today() + ".json"), fixture);

    const fs::path csv_out = tmp.path / "SPX.csv";
    CHECK(run({"fetch", "--symbol", "SPX", "--cache-dir", tmp.path.string(),
               "--csv", csv_out.string()}) == kExitOk);

    // Round trip: the CSV written by fetch parses back to the fixture series.
    const auto loaded = ingest::read_csv(csv_out);
    const auto direct = ingest::parse_alphavantage_daily(fixture, "SPX");
    REQUIRE(loaded.size() == direct.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].date == direct[i].date);
        CHECK(loaded[i].close == direct[i].close);
    }
}

TEST_CASE("fetch: garbage cache is a data error, throttle cache a transport error") {
    TempDir tmp;
    write_file(tmp.path / ("BAD-" + utc_today() + ".json"), "{\"nope\": 1}");
    CHECK(run({"fetch", "--symbol", "BAD", "--cache-dir", tmp.path.string()}) ==
          kExitData);

    const std::string throttle = read_file(test_data("alphavantage_throttle.json"));
    write_file(tmp.path / ("THR-" + utc_today() + ".json"), throttle);
    CHECK(run({"fetch", "--symbol", "THR", "--cache-dir", tmp.path.string()}) ==
          kExitTransport);
}

TEST_CASE("CLI parse errors exit with the config code") {
    CHECK(run({"unknown-subcommand"}) == kExitConfig);
    CHECK(run({"fetch"}) == kExitConfig); // --symbol required
}

TEST_CASE("bundled recipes parse and the synthetic one runs") {
    const fs::path recipes = fs::path(FCAST_RECIPE_DIR);
    for (const auto& entry : fs::directory_iterator(recipes)) {
        CHECK_NOTHROW(ExperimentConfig::load(entry.path()));
    }

    // The flagship synthetic recipe end to end (quicker LSTM settings).
    auto config = nlohmann::json::parse(
        read_file(recipes / "synthetic_martingale.json"));
    config["data"]["length"] = 400;
    config["models"][2]["epochs"] = 3;
    config["models"][2]["hidden_size"] = 3;
    TempDir tmp;
    const fs::path file = tmp.path / "recipe.json";
    write_file(file, config.dump());
    const fs::path out = tmp.path / "out";
    REQUIRE(run({"evaluate", "--config", file.string(), "--output-dir",
                 out.string()}) == kExitOk);
    const auto report = nlohmann::json::parse(read_file(out / "report.json"));
    CHECK(report.at("folds").at(0).at("models").size() == 3);
}
