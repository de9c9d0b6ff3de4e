#pragma once

#include "fcast/core/series.hpp"

#include <cstdint>

namespace fcast {

enum class WalkKind { Additive, Geometric };

/// Seeded synthetic random-walk recipe.
///
/// Additive:   v(t+1) = v(t) + drift + volatility * Z(t)
/// Geometric:  v(t+1) = v(t) * exp(drift + volatility * Z(t))
/// with Z(t) i.i.d. standard normal. The same spec always produces the
/// same series.
struct GeneratorSpec {
    WalkKind kind = WalkKind::Geometric;
    double drift = 0.0;       // b for additive walks, log-return mu for geometric
    double volatility = 0.0;  // per-step standard deviation, > 0
    double initial = 100.0;   // starting value, > 0
    std::size_t length = 0;   // total points, >= 2
    std::uint64_t seed = 0;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// The log-drift that makes a geometric walk a martingale:
/// E[exp(mu + sigma Z)] = 1  <=>  mu = -sigma^2 / 2.
double martingale_drift(double volatility);

/// First synthetic trading day (a Monday). Generated series step through
/// consecutive weekdays from here so they carry the same weekend gaps as
/// real exchange data.
Date synthetic_epoch();

/// Runs the walk. Geometric walks stay positive by construction; additive
/// walks may go nonpositive; callers who care should check all_positive().
ValueSeries generate(const GeneratorSpec& spec);

} // namespace fcast
