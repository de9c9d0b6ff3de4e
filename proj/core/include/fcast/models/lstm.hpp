#pragma once

#include "fcast/models/forecaster.hpp"
#include "fcast/models/loss.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fcast::models {

/// All weights of the single-layer LSTM plus the 1-node dense output.
/// Gate matrices act on the concatenation [h(t-1); x(t)].
struct LstmParams {
    int hidden_size = 0;
    int input_size = 1;

    Eigen::MatrixXd w_forget, w_input, w_cell, w_output; // N x (N + input)
    Eigen::VectorXd b_forget, b_input, b_cell, b_output; // N
    Eigen::RowVectorXd w_dense;                          // 1 x N
    double b_dense = 0.0;

    static LstmParams zeros(int hidden_size, int input_size = 1);

    /// Gaussian entries scaled by 1/sqrt(fan-in); forget-gate bias starts
    /// at +1 so early training does not wipe the cell state.
    static LstmParams random_init(int hidden_size, int input_size,
                                  std::mt19937_64& rng);

    /// Throws ModelError on inconsistent shapes or non-finite entries.
    void validate() const;
};

/// Per-step activations kept from a forward pass for backpropagation.
struct LstmTrajectory {
    std::vector<Eigen::VectorXd> concat_in;  // [h(t-1); x(t)]
    std::vector<Eigen::VectorXd> forget_gate, input_gate, cell_cand, output_gate;
    std::vector<Eigen::VectorXd> cell, hidden, cell_tanh;
    double prediction = 0.0;

    std::size_t steps() const { return hidden.size(); }
};

/// Runs the recurrence
///   f = sig(Wf a + bf), i = sig(Wi a + bi), g = tanh(Wg a + bg),
///   o = sig(Wo a + bo), c = f.c' + i.g, h = o.tanh(c)
/// over the sequence and applies the dense node to the final hidden state.
/// Throws ModelError on an empty sequence or a shape mismatch.
LstmTrajectory lstm_forward(const LstmParams& params,
                            const std::vector<Eigen::VectorXd>& sequence);

/// Univariate convenience: each value becomes a 1-vector input.
double lstm_forward_value(const LstmParams& params, std::span<const double> sequence);

/// Same tensor shapes as LstmParams.
struct LstmGradients {
    Eigen::MatrixXd w_forget, w_input, w_cell, w_output;
    Eigen::VectorXd b_forget, b_input, b_cell, b_output;
    Eigen::RowVectorXd w_dense;
    double b_dense = 0.0;

    static LstmGradients zeros(const LstmParams& params);
    void add_scaled(const LstmGradients& other, double scale);
    double max_abs() const;
};

/// Exact analytic gradients of loss(prediction, target) via
/// backpropagation through time over the full sequence.
LstmGradients lstm_backward(const LstmParams& params,
                            const LstmTrajectory& trajectory, double target,
                            LossKind loss);

struct TrainConfig {
    int hidden_size = 10;
    int epochs = 100;
    double learning_rate = 1e-3;
    int sequence_length = 30; // BPTT truncation window
    int batch_size = 32;
    std::uint64_t seed = 0;
    LossKind loss = LossKind::SquaredError;

    void validate() const;
};

/// Affine map used to standardize training inputs; predictions are mapped
/// back through the inverse.
struct Standardizer {
    double mean = 0.0;
    double scale = 1.0;

    double forward(double v) const { return (v - mean) / scale; }
    double inverse(double z) const { return z * scale + mean; }

    static Standardizer fit(std::span<const double> values);
};

struct LstmModel {
    LstmParams params;
    Standardizer norm;
    TrainConfig config;
    std::vector<double> epoch_loss; // index 0 is the untrained loss
    double best_loss = 0.0;
};

/// Mini-batch gradient descent over sliding windows (window -> next value),
/// deterministic for a fixed seed. Returns the parameters with the best
/// full-pass training loss seen across epochs.
/// Throws TrainingDivergedError (with the epoch) if the loss goes non-finite.
LstmModel train_lstm(const ValueSeries& training, const TrainConfig& config);

/// Predicts the next standardized value from the last sequence_length
/// points of the history and de-standardizes the output.
double lstm_predict(const LstmModel& model, const ValueSeries& history);

class LstmForecaster final : public Forecaster {
public:
    explicit LstmForecaster(TrainConfig config) : config_(config) {
        config_.validate();
    }

    std::string name() const override;

    void fit(const ValueSeries& training) override {
        model_ = train_lstm(training, config_);
        fitted_ = true;
    }

    double predict_next(const ValueSeries& history) const override;

    std::size_t min_history() const override {
        return static_cast<std::size_t>(config_.sequence_length);
    }

    const LstmModel& model() const;

private:
    TrainConfig config_;
    LstmModel model_;
    bool fitted_ = false;
};

} // namespace fcast::models
