#pragma once

#include "fcast/core/date.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fcast {

/// One daily OHLCV bar.
struct Bar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    std::int64_t volume = 0;
};

/// What to do with bars whose low/high range does not contain open/close.
/// Real vendor feeds occasionally ship such bars; dropping them would silently
/// change experiment windows, so the default keeps them and records a warning.
enum class OhlcPolicy { Strict, WarnAndKeep };

/// Date-indexed daily bars for one symbol. Immutable after construction.
///
/// Invariants enforced by the constructor:
///   - dates strictly increasing (no duplicates)
///   - all prices strictly positive
///   - low <= min(open, close) and high >= max(open, close), subject to
///     the OhlcPolicy above
/// Calendar gaps (weekends, holidays) are expected and allowed.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::string symbol, std::vector<Bar> bars,
                OhlcPolicy policy = OhlcPolicy::WarnAndKeep);

    const std::string& symbol() const { return symbol_; }
    const std::vector<Bar>& bars() const { return bars_; }
    std::size_t size() const { return bars_.size(); }
    bool empty() const { return bars_.empty(); }
    const Bar& operator[](std::size_t i) const { return bars_[i]; }
    const Bar& front() const { return bars_.front(); }
    const Bar& back() const { return bars_.back(); }

    /// Range-violation messages collected under OhlcPolicy::WarnAndKeep.
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    std::string symbol_;
    std::vector<Bar> bars_;
    std::vector<std::string> warnings_;
};

/// A dated sequence of real values: raw closes or a transform of them.
/// Dates strictly increase and every value is finite.
class ValueSeries {
public:
    ValueSeries() = default;
    ValueSeries(std::vector<Date> dates, std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    const Date& date(std::size_t i) const { return dates_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    double back() const { return values_.back(); }

    const std::vector<Date>& dates() const { return dates_; }
    std::span<const double> values() const { return values_; }

    bool all_positive() const;

    /// Half-open [begin, end) slice sharing no state with the original.
    ValueSeries slice(std::size_t begin, std::size_t end) const;

    /// The first `count` points.
    ValueSeries prefix(std::size_t count) const { return slice(0, count); }

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// The raw-close view of a price series.
ValueSeries closes(const PriceSeries& series);

/// Builds a degenerate OHLC series (open=high=low=close=value) so synthetic
/// value series can drive bar-based consumers like the backtester.
PriceSeries to_price_series(const ValueSeries& series, std::string symbol);

} // namespace fcast
