#pragma once

#include "fcast/core/series.hpp"
#include "fcast/models/forecaster.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <vector>

namespace fcast::backtest {

struct StrategyConfig {
    std::size_t lookback = 20;     // rolling-mean window, days
    double entry_threshold = 0.05; // fraction of the rolling mean
    double position_size = 1.0;    // shares per entry
    double initial_cash = 10000.0;
    double fee_per_trade = 0.0;    // off by default

    /// Throws ConfigError unless lookback >= 2 and entry_threshold > 0.
    void validate() const;
};

enum class TradeAction { Buy, Sell };

struct Trade {
    Date date;
    TradeAction action = TradeAction::Buy;
    double quantity = 0.0;
    double price = 0.0;
    double cash_after = 0.0;
};

/// Deterministic P&L record. The cash trajectory can be replayed from the
/// trade list alone; no position changes without a trade entry.
struct Ledger {
    double initial_cash = 0.0;
    std::vector<Trade> trades;
    double final_cash = 0.0;
    double final_pnl = 0.0;
    std::size_t skipped_insufficient_cash = 0;

    /// Recomputes cash from the trade list and compares bit-for-bit.
    bool replays_exactly() const;

    nlohmann::json to_json() const;
    void write_csv(std::ostream& out) const;
};

/// Mean reversion around a rolling mean of closes. At each day t >= lookback:
/// with m the mean of the previous `lookback` closes,
///   buy  when close(t) < m * (1 - threshold) and the forecast for t+1 is at
///        or above close(t);
///   sell (up to the held position) when close(t) > m * (1 + threshold) and
///        the forecast is at or below close(t).
/// Fills happen at the next day's open; forecasts use closes, so same-close
/// fills would peek ahead. The remaining position is closed at the final
/// bar's open. Entries that cash cannot cover are skipped and counted,
/// never overdrawn.
Ledger run_mean_reversion(const PriceSeries& series, const StrategyConfig& config,
                          const models::Forecaster& forecaster);

} // namespace fcast::backtest
