#include "fcast/online/discrepancy.hpp"
#include "fcast/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fcast::online {

void DiscrepancyWeights::validate(std::size_t rounds) const {
    if (q_time.size() != rounds) {
        throw ConfigError("discrepancy weights: one weight per round required");
    }
    double total = 0.0;
    for (double q : q_time) {
        if (!(q >= 0.0) || !std::isfinite(q)) {
            throw ConfigError("discrepancy weights: weights must be nonnegative");
        }
        total += q;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError("discrepancy weights: weights must sum to 1");
    }
    if (window < 1) {
        throw ConfigError("discrepancy weights: window must be >= 1");
    }
    if (window > rounds) {
        throw ConfigError("discrepancy weights: window exceeds round count");
    }
}

DiscrepancyWeights DiscrepancyWeights::suffix_uniform(std::size_t rounds,
                                                      std::size_t suffix,
                                                      std::size_t window) {
    if (suffix < 1 || suffix > rounds) {
        throw ConfigError("discrepancy weights: suffix must be in [1, rounds]");
    }
    DiscrepancyWeights w;
    w.window = window;
    w.q_time.assign(rounds, 0.0);
    for (std::size_t t = rounds - suffix; t < rounds; ++t) {
        w.q_time[t] = 1.0 / double(suffix);
    }
    return w;
}

double estimate_discrepancy(const std::vector<std::vector<double>>& losses,
                            const DiscrepancyWeights& weights) {
    const std::size_t rounds = losses.size();
    if (rounds == 0) {
        throw EmptyDataError("discrepancy: empty loss matrix");
    }
    weights.validate(rounds);
    const std::size_t experts = losses.front().size();
    for (const auto& row : losses) {
        if (row.size() != experts) {
            throw ConfigError("discrepancy: ragged loss matrix");
        }
    }

    double worst = 0.0;
    for (std::size_t h = 0; h < experts; ++h) {
        double recent = 0.0;
        for (std::size_t t = rounds - weights.window; t < rounds; ++t) {
            recent += losses[t][h];
        }
        recent /= double(weights.window);

        double weighted = 0.0;
        for (std::size_t t = 0; t < rounds; ++t) {
            weighted += weights.q_time[t] * losses[t][h];
        }
        worst = std::max(worst, std::abs(recent - weighted));
    }
    return worst;
}

OtbSelection select_otb_weights(const EnsembleState& state, const OtbConfig& config) {
    const std::size_t rounds = state.rounds();
    if (rounds == 0) {
        throw EmptyDataError("online_to_batch: empty state");
    }

    std::size_t target = config.target_window;
    if (target == 0) {
        target = std::max<std::size_t>(1, rounds / 2);
    }
    target = std::min(target, rounds);

    // Noise scale of a window-mean estimate, from the target window itself.
    const auto& mixture = state.mixture_losses();
    double mean = 0.0;
    for (std::size_t t = rounds - target; t < rounds; ++t) {
        mean += mixture[t];
    }
    mean /= double(target);
    double var = 0.0;
    for (std::size_t t = rounds - target; t < rounds; ++t) {
        var += (mixture[t] - mean) * (mixture[t] - mean);
    }
    const double sigma = std::sqrt(var / double(target));

    OtbSelection selection;
    for (std::size_t divisor : {1u, 2u, 4u, 8u}) {
        const std::size_t suffix = std::max<std::size_t>(1, rounds / divisor);
        if (!selection.candidate_windows.empty() &&
            selection.candidate_windows.back() == suffix) {
            continue; // short histories collapse adjacent candidates
        }
        const DiscrepancyWeights weights =
            DiscrepancyWeights::suffix_uniform(rounds, suffix, target);

        const double disc = estimate_discrepancy(state.loss_history(), weights);
        double weighted_loss = 0.0;
        for (std::size_t t = 0; t < rounds; ++t) {
            weighted_loss += weights.q_time[t] * mixture[t];
        }
        const double stability =
            config.stability_coeff * sigma / std::sqrt(double(suffix));

        selection.candidate_windows.push_back(suffix);
        selection.candidate_scores.push_back(disc + weighted_loss + stability);
    }

    const std::size_t best =
        std::min_element(selection.candidate_scores.begin(),
                         selection.candidate_scores.end()) -
        selection.candidate_scores.begin();
    selection.window = selection.candidate_windows[best];

    // Time-average of the played weight vectors under the winning q.
    const DiscrepancyWeights chosen =
        DiscrepancyWeights::suffix_uniform(rounds, selection.window, target);
    selection.expert_weights.assign(state.experts(), 0.0);
    const auto& history = state.weight_history();
    for (std::size_t t = 0; t < rounds; ++t) {
        for (std::size_t i = 0; i < state.experts(); ++i) {
            selection.expert_weights[i] += chosen.q_time[t] * history[t][i];
        }
    }
    return selection;
}

MixtureForecaster::MixtureForecaster(ExpertSet experts, std::vector<double> weights)
    : experts_(std::move(experts)), weights_(std::move(weights)) {
    experts_.validate();
    if (weights_.size() != experts_.size()) {
        throw ConfigError("mixture forecaster: one weight per expert required");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ConfigError("mixture forecaster: weights must be nonnegative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("mixture forecaster: weights must sum to 1");
    }
    // Exact renormalisation: a lone expert must weigh exactly 1, not the
    // floating-point sum of T copies of 1/T.
    for (double& w : weights_) {
        w /= total;
    }
}

void MixtureForecaster::fit(const ValueSeries& training) {
    for (const auto& e : experts_.experts) {
        e->fit(training);
    }
}

double MixtureForecaster::predict_next(const ValueSeries& history) const {
    double mixed = 0.0;
    for (std::size_t i = 0; i < experts_.size(); ++i) {
        if (weights_[i] > 0.0) {
            mixed += weights_[i] * experts_.experts[i]->predict_next(history);
        }
    }
    return mixed;
}

std::size_t MixtureForecaster::min_history() const {
    std::size_t need = 1;
    for (const auto& e : experts_.experts) {
        need = std::max(need, e->min_history());
    }
    return need;
}

std::unique_ptr<models::Forecaster> online_to_batch(const EnsembleState& state,
                                                    ExpertSet experts,
                                                    const OtbConfig& config) {
    experts.validate();
    if (experts.size() != state.experts()) {
        throw ConfigError("online_to_batch: expert count mismatch");
    }
    OtbSelection selection = select_otb_weights(state, config);
    return std::make_unique<MixtureForecaster>(std::move(experts),
                                               std::move(selection.expert_weights));
}

} // namespace fcast::online
