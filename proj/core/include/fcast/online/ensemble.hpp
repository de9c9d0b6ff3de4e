#pragma once

#include "fcast/models/forecaster.hpp"
#include "fcast/models/loss.hpp"

#include <span>
#include <vector>

namespace fcast::online {

/// The fixed hypothesis set the online algorithm mixes over.
struct ExpertSet {
    std::vector<models::ForecasterPtr> experts;
    std::vector<std::string> names;

    std::size_t size() const { return experts.size(); }
    void validate() const;
};

struct EnsembleConfig {
    double eta = 0.5;       // exponential-weights learning rate
    double loss_cap = 1.0;  // L_max: losses clipped to [0, loss_cap] pre-update
    models::LossKind loss = models::LossKind::SquaredError;

    void validate() const;
};

/// Learning rate with the standard sublinear-regret guarantee for losses in
/// [0,1]: eta = sqrt(8 ln N / T).
double regret_optimal_eta(std::size_t n_experts, std::size_t rounds);

/// Cap that keeps exponential weights bounded on price-scale losses: the
/// 99th percentile of the martingale's one-step losses over the training
/// window (never below a small positive floor).
double suggested_loss_cap(const ValueSeries& training, models::LossKind loss);

/// Exponentially weighted mixture over a fixed expert set.
///
/// Weights stay a probability vector after every update, for arbitrary loss
/// sequences including rounds with non-finite expert predictions (those
/// experts are charged loss_cap and flagged). Cumulative losses accumulate
/// unclipped; only the weight update sees clipped values.
class EnsembleState {
public:
    EnsembleState(std::size_t n_experts, EnsembleConfig config);

    std::size_t experts() const { return weights_.size(); }
    std::size_t rounds() const { return loss_history_.size(); }
    const EnsembleConfig& config() const { return config_; }

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& cumulative_losses() const { return cumulative_; }
    double cumulative_mixture_loss() const { return mixture_cumulative_; }

    /// Per-round, per-expert losses (rounds x experts), unclipped except for
    /// non-finite predictions which are recorded at loss_cap.
    const std::vector<std::vector<double>>& loss_history() const {
        return loss_history_;
    }

    /// Rounds in which at least one expert produced a non-finite prediction.
    const std::vector<std::size_t>& flagged_rounds() const { return flagged_; }

    /// Mixture losses per round (pre-update weights dotted with that
    /// round's losses).
    const std::vector<double>& mixture_losses() const { return mixture_losses_; }

    /// The weight vector actually played in each round (pre-update).
    const std::vector<std::vector<double>>& weight_history() const {
        return weight_history_;
    }

    friend double ensemble_step(EnsembleState& state,
                                std::span<const double> predictions,
                                double outcome);
    friend void ensemble_update(EnsembleState& state, std::span<const double> losses);

private:
    void apply_losses(std::span<const double> losses);

    EnsembleConfig config_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    std::vector<std::vector<double>> loss_history_;
    std::vector<std::vector<double>> weight_history_;
    std::vector<double> mixture_losses_;
    std::vector<std::size_t> flagged_;
    double mixture_cumulative_ = 0.0;
};

/// One online round: mix predictions with pre-update weights, observe the
/// outcome, charge losses, update weights multiplicatively. Returns the
/// ensemble prediction. Non-finite expert predictions are excluded from the
/// mixture (weights renormalized over the finite ones) and charged loss_cap.
double ensemble_step(EnsembleState& state, std::span<const double> predictions,
                     double outcome);

/// Adversarial entry point: feed externally computed per-expert losses.
void ensemble_update(EnsembleState& state, std::span<const double> losses);

/// Cumulative mixture loss minus the best expert's cumulative loss.
double regret(const EnsembleState& state);

} // namespace fcast::online
