#include "fcast/core/series.hpp"
#include "fcast/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace fcast {

PriceSeries::PriceSeries(std::string symbol, std::vector<Bar> bars, OhlcPolicy policy)
    : symbol_(std::move(symbol)), bars_(std::move(bars)) {
    for (std::size_t i = 0; i < bars_.size(); ++i) {
        const Bar& b = bars_[i];
        if (i > 0 && !(bars_[i - 1].date < b.date)) {
            throw FormatError(symbol_ + ": dates not strictly increasing at " +
                              b.date.to_string());
        }
        if (!(b.open > 0.0) || !(b.high > 0.0) || !(b.low > 0.0) || !(b.close > 0.0)) {
            throw FormatError(symbol_ + ": nonpositive price on " + b.date.to_string());
        }
        if (!std::isfinite(b.open) || !std::isfinite(b.high) ||
            !std::isfinite(b.low) || !std::isfinite(b.close)) {
            throw FormatError(symbol_ + ": non-finite price on " + b.date.to_string());
        }
        if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close)) {
            const std::string msg = symbol_ + ": OHLC range violation on " +
                                    b.date.to_string();
            if (policy == OhlcPolicy::Strict) {
                throw FormatError(msg);
            }
            warnings_.push_back(msg);
        }
    }
}

ValueSeries::ValueSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw FormatError("value series: date/value count mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw FormatError("value series: dates not strictly increasing at " +
                              dates_[i].to_string());
        }
        if (!std::isfinite(values_[i])) {
            throw FormatError("value series: non-finite value at " +
                              dates_[i].to_string());
        }
    }
}

bool ValueSeries::all_positive() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v > 0.0; });
}

ValueSeries ValueSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > values_.size()) {
        throw ConfigError("value series: slice out of range");
    }
    return ValueSeries(std::vector<Date>(dates_.begin() + begin, dates_.begin() + end),
                       std::vector<double>(values_.begin() + begin, values_.begin() + end));
}

ValueSeries closes(const PriceSeries& series) {
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(series.size());
    values.reserve(series.size());
    for (const Bar& b : series.bars()) {
        dates.push_back(b.date);
        values.push_back(b.close);
    }
    return ValueSeries(std::move(dates), std::move(values));
}

PriceSeries to_price_series(const ValueSeries& series, std::string symbol) {
    std::vector<Bar> bars;
    bars.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double v = series.value(i);
        bars.push_back(Bar{series.date(i), v, v, v, v, 0});
    }
    return PriceSeries(std::move(symbol), std::move(bars));
}

} // namespace fcast
