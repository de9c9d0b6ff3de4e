#include "fcast/online/ensemble.hpp"
#include "fcast/core/errors.hpp"
#include "fcast/models/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fcast::online {

void ExpertSet::validate() const {
    if (experts.empty()) {
        throw ConfigError("expert set: at least one expert required");
    }
    if (!names.empty() && names.size() != experts.size()) {
        throw ConfigError("expert set: name/expert count mismatch");
    }
    for (const auto& e : experts) {
        if (!e) {
            throw ConfigError("expert set: null expert");
        }
    }
}

void EnsembleConfig::validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw ConfigError("ensemble: eta must be finite and >= 0");
    }
    if (!(loss_cap > 0.0) || !std::isfinite(loss_cap)) {
        throw ConfigError("ensemble: loss_cap must be finite and > 0");
    }
}

double regret_optimal_eta(std::size_t n_experts, std::size_t rounds) {
    if (n_experts < 1 || rounds < 1) {
        throw ConfigError("regret_optimal_eta: need experts >= 1 and rounds >= 1");
    }
    return std::sqrt(8.0 * std::log(double(n_experts)) / double(rounds));
}

double suggested_loss_cap(const ValueSeries& training, models::LossKind loss) {
    if (training.size() < 2) {
        throw ConfigError("suggested_loss_cap: need at least 2 training values");
    }
    std::vector<double> losses;
    losses.reserve(training.size() - 1);
    for (std::size_t t = 1; t < training.size(); ++t) {
        losses.push_back(
            models::loss_value(loss, training.value(t - 1), training.value(t)));
    }
    std::sort(losses.begin(), losses.end());
    const std::size_t idx =
        std::min(losses.size() - 1,
                 static_cast<std::size_t>(0.99 * double(losses.size())));
    return std::max(losses[idx], 1e-12);
}

EnsembleState::EnsembleState(std::size_t n_experts, EnsembleConfig config)
    : config_(config) {
    config_.validate();
    if (n_experts == 0) {
        throw ConfigError("ensemble: need at least one expert");
    }
    weights_.assign(n_experts, 1.0 / double(n_experts));
    cumulative_.assign(n_experts, 0.0);
}

void EnsembleState::apply_losses(std::span<const double> losses) {
    const std::size_t n = weights_.size();
    weight_history_.push_back(weights_);

    double mixture_loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mixture_loss += weights_[i] * losses[i];
        cumulative_[i] += losses[i];
    }
    mixture_losses_.push_back(mixture_loss);
    mixture_cumulative_ += mixture_loss;
    loss_history_.emplace_back(losses.begin(), losses.end());

    // Multiplicative update on clipped losses, stabilised by subtracting the
    // per-round minimum before exponentiation.
    std::vector<double> clipped(n);
    for (std::size_t i = 0; i < n; ++i) {
        clipped[i] = std::clamp(losses[i], 0.0, config_.loss_cap);
    }
    const double low = *std::min_element(clipped.begin(), clipped.end());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        weights_[i] *= std::exp(-config_.eta * (clipped[i] - low));
        total += weights_[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw ModelError("ensemble: weight normalisation failed");
    }
    for (double& w : weights_) {
        w /= total;
    }
}

double ensemble_step(EnsembleState& state, std::span<const double> predictions,
                     double outcome) {
    const std::size_t n = state.weights_.size();
    if (predictions.size() != n) {
        throw ConfigError("ensemble_step: one prediction per expert required");
    }
    if (!std::isfinite(outcome)) {
        throw ConfigError("ensemble_step: outcome must be finite");
    }

    // Mixture over the finite predictions with pre-update weights.
    double mixed = 0.0;
    double finite_weight = 0.0;
    bool any_bad = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(predictions[i])) {
            mixed += state.weights_[i] * predictions[i];
            finite_weight += state.weights_[i];
        } else {
            any_bad = true;
        }
    }
    if (finite_weight <= 0.0) {
        throw ModelError("ensemble_step: no expert produced a finite prediction");
    }
    mixed /= finite_weight;
    if (any_bad) {
        state.flagged_.push_back(state.rounds());
    }

    std::vector<double> losses(n);
    for (std::size_t i = 0; i < n; ++i) {
        losses[i] = std::isfinite(predictions[i])
                        ? models::loss_value(state.config_.loss, predictions[i], outcome)
                        : state.config_.loss_cap;
    }
    state.apply_losses(losses);
    return mixed;
}

void ensemble_update(EnsembleState& state, std::span<const double> losses) {
    if (losses.size() != state.weights_.size()) {
        throw ConfigError("ensemble_update: one loss per expert required");
    }
    for (double l : losses) {
        if (!std::isfinite(l)) {
            throw ConfigError("ensemble_update: losses must be finite");
        }
    }
    state.apply_losses(losses);
}

double regret(const EnsembleState& state) {
    if (state.rounds() == 0) {
        return 0.0;
    }
    const double best = *std::min_element(state.cumulative_losses().begin(),
                                          state.cumulative_losses().end());
    return state.cumulative_mixture_loss() - best;
}

} // namespace fcast::online
