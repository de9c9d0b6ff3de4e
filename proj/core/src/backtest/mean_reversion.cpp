#include "fcast/backtest/mean_reversion.hpp"
#include "fcast/core/errors.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace fcast::backtest {

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

void StrategyConfig::validate() const {
    if (lookback < 2) {
        throw ConfigError("strategy: lookback must be >= 2");
    }
    if (!(entry_threshold > 0.0)) {
        throw ConfigError("strategy: entry_threshold must be > 0");
    }
    if (!(position_size > 0.0)) {
        throw ConfigError("strategy: position_size must be > 0");
    }
    if (!(initial_cash >= 0.0) || !(fee_per_trade >= 0.0)) {
        throw ConfigError("strategy: cash and fees must be >= 0");
    }
}

bool Ledger::replays_exactly() const {
    double cash = initial_cash;
    for (const Trade& t : trades) {
        cash = t.action == TradeAction::Buy ? cash - t.quantity * t.price
                                            : cash + t.quantity * t.price;
        // Fees were already folded into cash_after when the trade happened.
        if (cash != t.cash_after) {
            return false;
        }
    }
    return cash == final_cash;
}

nlohmann::json Ledger::to_json() const {
    nlohmann::json trades_json = nlohmann::json::array();
    for (const Trade& t : trades) {
        trades_json.push_back({{"date", t.date.to_string()},
                               {"action", t.action == TradeAction::Buy ? "buy" : "sell"},
                               {"quantity", t.quantity},
                               {"price", t.price},
                               {"cash_after", t.cash_after}});
    }
    return {{"format_version", 1},
            {"initial_cash", initial_cash},
            {"final_cash", final_cash},
            {"final_pnl", final_pnl},
            {"skipped_insufficient_cash", skipped_insufficient_cash},
            {"trades", std::move(trades_json)}};
}

void Ledger::write_csv(std::ostream& out) const {
    out << "date,action,quantity,price,cash\n";
    for (const Trade& t : trades) {
        out << t.date.to_string() << ','
            << (t.action == TradeAction::Buy ? "buy" : "sell") << ','
            << shortest(t.quantity) << ',' << shortest(t.price) << ','
            << shortest(t.cash_after) << '\n';
    }
}

Ledger run_mean_reversion(const PriceSeries& series, const StrategyConfig& config,
                          const models::Forecaster& forecaster) {
    config.validate();
    const std::size_t n = series.size();
    if (n <= config.lookback) {
        throw ConfigError("strategy: series must be longer than the lookback");
    }

    const ValueSeries close_history = closes(series);

    Ledger ledger;
    ledger.initial_cash = config.initial_cash;
    double cash = config.initial_cash;
    double position = 0.0;

    const auto record = [&](std::size_t bar, TradeAction action, double qty) {
        const double price = series[bar].open;
        cash += (action == TradeAction::Buy ? -1.0 : 1.0) * qty * price;
        cash -= config.fee_per_trade;
        position += (action == TradeAction::Buy ? qty : -qty);
        ledger.trades.push_back(Trade{series[bar].date, action, qty, price, cash});
    };

    // Signals close at t, fills at the open of t+1; the last signal day is
    // therefore n-2.
    for (std::size_t t = config.lookback; t + 1 < n; ++t) {
        double mean = 0.0;
        for (std::size_t j = t - config.lookback; j < t; ++j) {
            mean += series[j].close;
        }
        mean /= double(config.lookback);

        const double close = series[t].close;
        const double forecast =
            forecaster.predict_next(close_history.slice(0, t + 1));

        if (close < mean * (1.0 - config.entry_threshold) && forecast >= close) {
            const double cost =
                config.position_size * series[t + 1].open + config.fee_per_trade;
            if (cost <= cash) {
                record(t + 1, TradeAction::Buy, config.position_size);
            } else {
                ++ledger.skipped_insufficient_cash;
            }
        } else if (close > mean * (1.0 + config.entry_threshold) &&
                   forecast <= close && position > 0.0) {
            record(t + 1, TradeAction::Sell, std::min(config.position_size, position));
        }
    }

    if (position > 0.0) {
        record(n - 1, TradeAction::Sell, position);
    }

    ledger.final_cash = cash;
    ledger.final_pnl = cash - config.initial_cash;
    return ledger;
}

} // namespace fcast::backtest
