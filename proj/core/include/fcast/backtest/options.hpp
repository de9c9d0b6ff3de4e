#pragma once

namespace fcast::backtest {

enum class OptionSide { Call, Put };

struct OptionContract {
    OptionSide side = OptionSide::Call;
    double strike = 0.0;
    double premium = 0.0;

    /// Throws ConfigError unless strike > 0 and premium >= 0.
    void validate() const;
};

/// Net payoff at expiry against the spot price:
///   call: max(spot - strike, 0) - premium
///   put:  max(strike - spot, 0) - premium
/// Throws ConfigError when spot <= 0.
double payoff(const OptionContract& contract, double spot);

} // namespace fcast::backtest
