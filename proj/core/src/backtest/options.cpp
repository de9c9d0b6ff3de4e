#include "fcast/backtest/options.hpp"
#include "fcast/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fcast::backtest {

void OptionContract::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike)) {
        throw ConfigError("option: strike must be > 0");
    }
    if (!(premium >= 0.0) || !std::isfinite(premium)) {
        throw ConfigError("option: premium must be >= 0");
    }
}

double payoff(const OptionContract& contract, double spot) {
    contract.validate();
    if (!(spot > 0.0)) {
        throw ConfigError("option: spot must be > 0");
    }
    const double intrinsic = contract.side == OptionSide::Call
                                 ? std::max(spot - contract.strike, 0.0)
                                 : std::max(contract.strike - spot, 0.0);
    return intrinsic - contract.premium;
}

} // namespace fcast::backtest
