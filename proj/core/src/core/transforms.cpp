#include "fcast/core/transforms.hpp"
#include "fcast/core/errors.hpp"

namespace fcast {

namespace {

template <typename Fn>
ValueSeries per_bar(const PriceSeries& series, Fn&& fn) {
    if (series.empty()) {
        throw EmptyDataError(series.symbol() + ": cannot transform an empty series");
    }
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(series.size());
    values.reserve(series.size());
    for (const Bar& b : series.bars()) {
        dates.push_back(b.date);
        values.push_back(fn(b));
    }
    return ValueSeries(std::move(dates), std::move(values));
}

} // namespace

ValueSeries transform_divide(const PriceSeries& series) {
    return per_bar(series, [&](const Bar& b) {
        if (b.open == 0.0) {
            throw FormatError(series.symbol() + ": zero open price on " +
                              b.date.to_string());
        }
        return b.close / b.open;
    });
}

ValueSeries transform_subtract(const PriceSeries& series) {
    return per_bar(series, [](const Bar& b) { return b.close - b.open; });
}

ValueSeries apply_transform(const PriceSeries& series, Transform transform) {
    switch (transform) {
    case Transform::Close:
        if (series.empty()) {
            throw EmptyDataError(series.symbol() + ": cannot transform an empty series");
        }
        return closes(series);
    case Transform::Divide:
        return transform_divide(series);
    case Transform::Subtract:
        return transform_subtract(series);
    }
    throw ConfigError("unknown transform");
}

Transform transform_from_name(const std::string& name) {
    if (name == "close") return Transform::Close;
    if (name == "divide") return Transform::Divide;
    if (name == "subtract") return Transform::Subtract;
    throw ConfigError("unknown transform '" + name + "' (want close|divide|subtract)");
}

std::string transform_name(Transform transform) {
    switch (transform) {
    case Transform::Close: return "close";
    case Transform::Divide: return "divide";
    case Transform::Subtract: return "subtract";
    }
    throw ConfigError("unknown transform");
}

} // namespace fcast
