#pragma once

#include "fcast/online/ensemble.hpp"

#include <cstddef>
#include <vector>

namespace fcast::online {

/// Weighting of the past used when estimating how far the recent loss
/// distribution has drifted from the weighted sample.
struct DiscrepancyWeights {
    std::vector<double> q_time; // per-round weights over the past T rounds
    std::size_t window = 1;     // s: size of the recent target window

    /// Throws ConfigError unless q_time has one weight per round, is
    /// nonnegative, sums to 1 within 1e-12 and 1 <= window <= rounds.
    void validate(std::size_t rounds) const;

    /// Uniform mass over the last `suffix` of `rounds` rounds.
    static DiscrepancyWeights suffix_uniform(std::size_t rounds, std::size_t suffix,
                                             std::size_t window);
};

/// Empirical finite-hypothesis discrepancy:
///   max over experts h of | mean loss of h over the last s rounds
///                           - sum_t q_time(t) * loss(h, t) |.
/// Zero whenever the weighted past profile matches the recent window for
/// every expert; grows when the process drifts.
///
/// `losses` is rounds x experts. Throws ConfigError when window > rounds.
double estimate_discrepancy(const std::vector<std::vector<double>>& losses,
                            const DiscrepancyWeights& weights);

struct OtbConfig {
    /// Target window s. 0 means rounds/2 (clamped to >= 1).
    std::size_t target_window = 0;

    /// Weight of the stability term in the selection score. Uniform mass
    /// over a suffix of length k has 2-norm 1/sqrt(k), so this term prefers
    /// longer windows unless the discrepancy evidence says otherwise.
    double stability_coeff = 12.0;
};

struct OtbSelection {
    std::size_t window = 0;                  // chosen suffix length
    std::vector<double> expert_weights;      // time-averaged mixture weights
    std::vector<std::size_t> candidate_windows;
    std::vector<double> candidate_scores;
};

/// Grid over suffix-uniform windows {T, T/2, T/4, T/8}: each candidate q is
/// scored by estimated discrepancy + q-weighted empirical mixture loss +
/// stability_coeff * sigma_hat * ||q||_2, and the minimiser wins. The
/// returned expert weights are the q-weighted average of the weight vectors
/// the online pass actually played.
OtbSelection select_otb_weights(const EnsembleState& state,
                                const OtbConfig& config = {});

/// Fixed mixture of fitted experts; the output of online-to-batch
/// conversion.
class MixtureForecaster final : public models::Forecaster {
public:
    MixtureForecaster(ExpertSet experts, std::vector<double> weights);

    std::string name() const override { return "otb_mixture"; }
    void fit(const ValueSeries& training) override;
    double predict_next(const ValueSeries& history) const override;
    std::size_t min_history() const override;

    const std::vector<double>& mixture_weights() const { return weights_; }

private:
    ExpertSet experts_;
    std::vector<double> weights_;
};

/// Converts a completed online pass into a single batch forecaster.
/// Throws EmptyDataError on a state with no rounds.
std::unique_ptr<models::Forecaster> online_to_batch(const EnsembleState& state,
                                                    ExpertSet experts,
                                                    const OtbConfig& config = {});

} // namespace fcast::online
