#include "fcast/core/random_walk.hpp"
#include "fcast/core/errors.hpp"

#include <cmath>
#include <random>

namespace fcast {

void GeneratorSpec::validate() const {
    if (!(volatility > 0.0)) {
        throw ConfigError("generator: volatility must be > 0");
    }
    if (length < 2) {
        throw ConfigError("generator: length must be >= 2");
    }
    if (!(initial > 0.0)) {
        throw ConfigError("generator: initial value must be > 0");
    }
    if (!std::isfinite(drift) || !std::isfinite(volatility) || !std::isfinite(initial)) {
        throw ConfigError("generator: parameters must be finite");
    }
}

double martingale_drift(double volatility) {
    if (volatility < 0.0) {
        throw ConfigError("martingale_drift: volatility must be >= 0");
    }
    return -0.5 * volatility * volatility;
}

Date synthetic_epoch() {
    return Date(2000, 1, 3);
}

ValueSeries generate(const GeneratorSpec& spec) {
    spec.validate();

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(spec.length);
    values.reserve(spec.length);

    Date day = synthetic_epoch();
    double v = spec.initial;
    dates.push_back(day);
    values.push_back(v);

    for (std::size_t i = 1; i < spec.length; ++i) {
        const double step = spec.drift + spec.volatility * noise(rng);
        v = spec.kind == WalkKind::Geometric ? v * std::exp(step) : v + step;
        day = day.next_weekday();
        dates.push_back(day);
        values.push_back(v);
    }
    return ValueSeries(std::move(dates), std::move(values));
}

} // namespace fcast
