#pragma once

#include "fcast/core/series.hpp"

#include <string>

namespace fcast {

/// close / open per bar, the percent-change view of a day.
/// Throws FormatError on a zero open, EmptyDataError on an empty series.
ValueSeries transform_divide(const PriceSeries& series);

/// close - open per bar, the absolute-change view of a day.
ValueSeries transform_subtract(const PriceSeries& series);

enum class Transform { Close, Divide, Subtract };

ValueSeries apply_transform(const PriceSeries& series, Transform transform);

Transform transform_from_name(const std::string& name);
std::string transform_name(Transform transform);

} // namespace fcast
