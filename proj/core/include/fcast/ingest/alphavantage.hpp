#pragma once

#include "fcast/core/date.hpp"
#include "fcast/core/series.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace fcast::ingest {

/// Where daily data comes from. The API key is read from the environment
/// (ALPHAVANTAGE_API_KEY), never from flags, so it stays out of shell
/// history and report files.
struct DataSourceConfig {
    std::string api_key;
    std::filesystem::path cache_dir;
    std::string symbol;

    static DataSourceConfig from_environment(std::string symbol,
                                             std::filesystem::path cache_dir);

    /// Throws ConfigError on an empty/ill-formed symbol or unusable cache dir.
    void validate() const;
};

/// Parses the daily-time-series JSON response: a metadata object plus a
/// "Time Series (Daily)" object of "YYYY-MM-DD" keys. Bars come back sorted
/// ascending regardless of document key order.
PriceSeries parse_alphavantage_daily(const std::string& document, std::string symbol,
                                     OhlcPolicy policy = OhlcPolicy::WarnAndKeep);

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Minimal transport seam so tests can inject canned responses.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& host, const std::string& path) = 0;
};

/// TLS client against the real endpoint.
std::unique_ptr<HttpTransport> make_https_transport();

struct FetchResult {
    PriceSeries series;
    std::filesystem::path cache_file;
    bool from_cache = false;
};

/// Returns the cached series when a cache file for (symbol, fetch day)
/// exists; otherwise performs one GET, validates, writes the verbatim JSON
/// to the cache atomically, and returns it. Never fetches the same symbol
/// twice in one day.
///
/// Errors: TransportError on HTTP failure with no cache, ThrottledError when
/// the body is the vendor's rate-limit message, FormatError on a malformed
/// document.
FetchResult fetch_daily(const DataSourceConfig& config, HttpTransport& transport,
                        Date fetch_day);

/// Real transport and today's UTC date.
FetchResult fetch_daily(const DataSourceConfig& config);

} // namespace fcast::ingest
