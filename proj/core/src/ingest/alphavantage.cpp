#include "fcast/ingest/alphavantage.hpp"
#include "fcast/core/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fcast::ingest {

namespace {

constexpr const char* kSeriesKey = "Time Series (Daily)";

double parse_decimal(const nlohmann::json& obj, const char* key,
                     const std::string& date_context) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        throw FormatError("alphavantage: missing field '" + std::string(key) +
                          "' for " + date_context);
    }
    const std::string text = obj.at(key).get<std::string>();
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw FormatError("alphavantage: unparseable number '" + text + "' in field '" +
                          key + "' for " + date_context);
    }
}

std::int64_t parse_count(const nlohmann::json& obj, const char* key,
                         const std::string& date_context) {
    const double v = parse_decimal(obj, key, date_context);
    return static_cast<std::int64_t>(v);
}

} // namespace

DataSourceConfig DataSourceConfig::from_environment(std::string symbol,
                                                    std::filesystem::path cache_dir) {
    DataSourceConfig config;
    config.symbol = std::move(symbol);
    config.cache_dir = std::move(cache_dir);
    if (const char* key = std::getenv("ALPHAVANTAGE_API_KEY")) {
        config.api_key = key;
    }
    return config;
}

void DataSourceConfig::validate() const {
    if (symbol.empty()) {
        throw ConfigError("data source: symbol must be nonempty");
    }
    const bool ok = std::all_of(symbol.begin(), symbol.end(), [](unsigned char c) {
        return (std::isalnum(c) && !std::islower(c)) || c == '.';
    });
    if (!ok) {
        throw ConfigError("data source: symbol '" + symbol +
                          "' must be uppercase alphanumeric (dots allowed)");
    }
    if (cache_dir.empty()) {
        throw ConfigError("data source: cache_dir must be set");
    }
}

PriceSeries parse_alphavantage_daily(const std::string& document, std::string symbol,
                                     OhlcPolicy policy) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("alphavantage: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw FormatError("alphavantage: response is not a JSON object");
    }
    if (doc.contains("Note") || doc.contains("Information")) {
        const auto& msg = doc.contains("Note") ? doc.at("Note") : doc.at("Information");
        throw ThrottledError("alphavantage: throttled: " +
                             msg.get<std::string>());
    }
    if (!doc.contains(kSeriesKey)) {
        throw FormatError(std::string("alphavantage: missing top-level key '") +
                          kSeriesKey + "'");
    }
    const auto& table = doc.at(kSeriesKey);
    if (!table.is_object()) {
        throw FormatError(std::string("alphavantage: '") + kSeriesKey +
                          "' is not an object");
    }
    if (table.empty()) {
        throw EmptyDataError("alphavantage: empty daily series for " + symbol);
    }

    std::vector<Bar> bars;
    bars.reserve(table.size());
    for (const auto& [date_text, fields] : table.items()) {
        Bar bar;
        try {
            bar.date = Date::from_string(date_text);
        } catch (const FormatError& e) {
            throw FormatError(std::string("alphavantage: bad date key: ") + e.what());
        }
        if (!fields.is_object()) {
            throw FormatError("alphavantage: entry for " + date_text +
                              " is not an object");
        }
        bar.open = parse_decimal(fields, "1. open", date_text);
        bar.high = parse_decimal(fields, "2. high", date_text);
        bar.low = parse_decimal(fields, "3. low", date_text);
        bar.close = parse_decimal(fields, "4. close", date_text);
        bar.volume = parse_count(fields, "5. volume", date_text);
        bars.push_back(bar);
    }
    std::sort(bars.begin(), bars.end(),
              [](const Bar& a, const Bar& b) { return a.date < b.date; });
    return PriceSeries(std::move(symbol), std::move(bars), policy);
}

FetchResult fetch_daily(const DataSourceConfig& config, HttpTransport& transport,
                        Date fetch_day) {
    config.validate();

    std::filesystem::create_directories(config.cache_dir);
    const std::filesystem::path cache_file =
        config.cache_dir / (config.symbol + "-" + fetch_day.to_string() + ".json");

    if (std::filesystem::exists(cache_file)) {
        std::ifstream in(cache_file);
        std::stringstream body;
        body << in.rdbuf();
        return FetchResult{parse_alphavantage_daily(body.str(), config.symbol),
                           cache_file, true};
    }

    const std::string path = "/query?function=TIME_SERIES_DAILY&symbol=" +
                             config.symbol + "&outputsize=full&apikey=" + config.api_key;
    HttpResponse response = transport.get("www.alphavantage.co", path);
    if (response.status != 200) {
        throw TransportError("alphavantage: HTTP " + std::to_string(response.status) +
                             " for " + config.symbol);
    }

    // Parse before caching so a throttle message or bad payload never poisons
    // the cache.
    PriceSeries series = parse_alphavantage_daily(response.body, config.symbol);

    const std::filesystem::path tmp = cache_file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw FormatError("cannot write cache file: " + tmp.string());
        }
        out << response.body;
    }
    std::filesystem::rename(tmp, cache_file);

    return FetchResult{std::move(series), cache_file, false};
}

FetchResult fetch_daily(const DataSourceConfig& config) {
    const auto now = std::chrono::system_clock::now();
    const auto days = std::chrono::floor<std::chrono::days>(now);
    const Date today = Date::from_serial(static_cast<int>(days.time_since_epoch().count()));
    auto transport = make_https_transport();
    return fetch_daily(config, *transport, today);
}

} // namespace fcast::ingest
