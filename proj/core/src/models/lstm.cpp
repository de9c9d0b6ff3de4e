#include "fcast/models/lstm.hpp"
#include "fcast/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fcast::models {

namespace {

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) {
    return 1.0 / (1.0 + (-z).exp());
}

} // namespace

LstmParams LstmParams::zeros(int hidden_size, int input_size) {
    if (hidden_size < 1 || input_size < 1) {
        throw ModelError("lstm: hidden_size and input_size must be >= 1");
    }
    LstmParams p;
    p.hidden_size = hidden_size;
    p.input_size = input_size;
    const int cols = hidden_size + input_size;
    p.w_forget = Eigen::MatrixXd::Zero(hidden_size, cols);
    p.w_input = Eigen::MatrixXd::Zero(hidden_size, cols);
    p.w_cell = Eigen::MatrixXd::Zero(hidden_size, cols);
    p.w_output = Eigen::MatrixXd::Zero(hidden_size, cols);
    p.b_forget = Eigen::VectorXd::Zero(hidden_size);
    p.b_input = Eigen::VectorXd::Zero(hidden_size);
    p.b_cell = Eigen::VectorXd::Zero(hidden_size);
    p.b_output = Eigen::VectorXd::Zero(hidden_size);
    p.w_dense = Eigen::RowVectorXd::Zero(hidden_size);
    p.b_dense = 0.0;
    return p;
}

LstmParams LstmParams::random_init(int hidden_size, int input_size,
                                   std::mt19937_64& rng) {
    LstmParams p = zeros(hidden_size, input_size);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double gate_scale = 1.0 / std::sqrt(double(hidden_size + input_size));
    const double dense_scale = 1.0 / std::sqrt(double(hidden_size));
    const auto fill = [&](Eigen::MatrixXd& m, double scale) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                m(i, j) = scale * gauss(rng);
            }
        }
    };
    fill(p.w_forget, gate_scale);
    fill(p.w_input, gate_scale);
    fill(p.w_cell, gate_scale);
    fill(p.w_output, gate_scale);
    for (Eigen::Index i = 0; i < hidden_size; ++i) {
        p.w_dense(i) = dense_scale * gauss(rng);
    }
    p.b_forget.setOnes();
    return p;
}

void LstmParams::validate() const {
    const int cols = hidden_size + input_size;
    const auto gate_ok = [&](const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
        return w.rows() == hidden_size && w.cols() == cols && b.size() == hidden_size &&
               w.allFinite() && b.allFinite();
    };
    if (hidden_size < 1 || input_size < 1 ||
        !gate_ok(w_forget, b_forget) || !gate_ok(w_input, b_input) ||
        !gate_ok(w_cell, b_cell) || !gate_ok(w_output, b_output) ||
        w_dense.size() != hidden_size || !w_dense.allFinite() ||
        !std::isfinite(b_dense)) {
        throw ModelError("lstm: inconsistent or non-finite parameters");
    }
}

LstmTrajectory lstm_forward(const LstmParams& params,
                            const std::vector<Eigen::VectorXd>& sequence) {
    params.validate();
    if (sequence.empty()) {
        throw ModelError("lstm: cannot run a forward pass on an empty sequence");
    }
    const int n = params.hidden_size;

    LstmTrajectory traj;
    const std::size_t steps = sequence.size();
    traj.concat_in.reserve(steps);
    traj.forget_gate.reserve(steps);
    traj.input_gate.reserve(steps);
    traj.cell_cand.reserve(steps);
    traj.output_gate.reserve(steps);
    traj.cell.reserve(steps);
    traj.hidden.reserve(steps);
    traj.cell_tanh.reserve(steps);

    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);

    for (const Eigen::VectorXd& x : sequence) {
        if (x.size() != params.input_size) {
            throw ModelError("lstm: input vector size mismatch");
        }
        Eigen::VectorXd a(n + params.input_size);
        a << h, x;

        const Eigen::VectorXd f = sigmoid((params.w_forget * a + params.b_forget).array());
        const Eigen::VectorXd i = sigmoid((params.w_input * a + params.b_input).array());
        const Eigen::VectorXd g = (params.w_cell * a + params.b_cell).array().tanh();
        const Eigen::VectorXd o = sigmoid((params.w_output * a + params.b_output).array());

        c = f.cwiseProduct(c) + i.cwiseProduct(g);
        const Eigen::VectorXd ct = c.array().tanh();
        h = o.cwiseProduct(ct);

        traj.concat_in.push_back(std::move(a));
        traj.forget_gate.push_back(f);
        traj.input_gate.push_back(i);
        traj.cell_cand.push_back(g);
        traj.output_gate.push_back(o);
        traj.cell.push_back(c);
        traj.cell_tanh.push_back(ct);
        traj.hidden.push_back(h);
    }

    traj.prediction = params.w_dense.dot(traj.hidden.back()) + params.b_dense;
    return traj;
}

double lstm_forward_value(const LstmParams& params, std::span<const double> sequence) {
    std::vector<Eigen::VectorXd> inputs;
    inputs.reserve(sequence.size());
    for (double v : sequence) {
        inputs.push_back(Eigen::VectorXd::Constant(1, v));
    }
    return lstm_forward(params, inputs).prediction;
}

LstmGradients LstmGradients::zeros(const LstmParams& params) {
    LstmGradients g;
    const int n = params.hidden_size;
    const int cols = n + params.input_size;
    g.w_forget = Eigen::MatrixXd::Zero(n, cols);
    g.w_input = Eigen::MatrixXd::Zero(n, cols);
    g.w_cell = Eigen::MatrixXd::Zero(n, cols);
    g.w_output = Eigen::MatrixXd::Zero(n, cols);
    g.b_forget = Eigen::VectorXd::Zero(n);
    g.b_input = Eigen::VectorXd::Zero(n);
    g.b_cell = Eigen::VectorXd::Zero(n);
    g.b_output = Eigen::VectorXd::Zero(n);
    g.w_dense = Eigen::RowVectorXd::Zero(n);
    g.b_dense = 0.0;
    return g;
}

void LstmGradients::add_scaled(const LstmGradients& other, double scale) {
    w_forget += scale * other.w_forget;
    w_input += scale * other.w_input;
    w_cell += scale * other.w_cell;
    w_output += scale * other.w_output;
    b_forget += scale * other.b_forget;
    b_input += scale * other.b_input;
    b_cell += scale * other.b_cell;
    b_output += scale * other.b_output;
    w_dense += scale * other.w_dense;
    b_dense += scale * other.b_dense;
}

double LstmGradients::max_abs() const {
    double m = std::abs(b_dense);
    m = std::max(m, w_forget.cwiseAbs().maxCoeff());
    m = std::max(m, w_input.cwiseAbs().maxCoeff());
    m = std::max(m, w_cell.cwiseAbs().maxCoeff());
    m = std::max(m, w_output.cwiseAbs().maxCoeff());
    m = std::max(m, b_forget.cwiseAbs().maxCoeff());
    m = std::max(m, b_input.cwiseAbs().maxCoeff());
    m = std::max(m, b_cell.cwiseAbs().maxCoeff());
    m = std::max(m, b_output.cwiseAbs().maxCoeff());
    m = std::max(m, w_dense.cwiseAbs().maxCoeff());
    return m;
}

LstmGradients lstm_backward(const LstmParams& params,
                            const LstmTrajectory& trajectory, double target,
                            LossKind loss) {
    if (trajectory.steps() == 0) {
        throw ModelError("lstm: backward pass needs a forward trajectory");
    }
    const int n = params.hidden_size;
    const std::size_t steps = trajectory.steps();

    LstmGradients grads = LstmGradients::zeros(params);

    const double dy = loss_derivative(loss, trajectory.prediction, target);
    grads.w_dense = dy * trajectory.hidden.back().transpose();
    grads.b_dense = dy;

    Eigen::VectorXd dh = params.w_dense.transpose() * dy;
    Eigen::VectorXd dc = Eigen::VectorXd::Zero(n);

    for (std::size_t t = steps; t-- > 0;) {
        const Eigen::VectorXd& f = trajectory.forget_gate[t];
        const Eigen::VectorXd& i = trajectory.input_gate[t];
        const Eigen::VectorXd& g = trajectory.cell_cand[t];
        const Eigen::VectorXd& o = trajectory.output_gate[t];
        const Eigen::VectorXd& ct = trajectory.cell_tanh[t];
        const Eigen::VectorXd& a = trajectory.concat_in[t];
        const Eigen::VectorXd c_prev =
            t > 0 ? trajectory.cell[t - 1] : Eigen::VectorXd::Zero(n);

        const Eigen::VectorXd d_o = dh.cwiseProduct(ct);
        dc += dh.cwiseProduct(o).cwiseProduct(
            (1.0 - ct.array().square()).matrix());

        const Eigen::VectorXd d_f = dc.cwiseProduct(c_prev);
        const Eigen::VectorXd d_i = dc.cwiseProduct(g);
        const Eigen::VectorXd d_g = dc.cwiseProduct(i);

        // Pre-activation gradients through the gate nonlinearities.
        const Eigen::VectorXd dz_f =
            d_f.cwiseProduct(f).cwiseProduct((1.0 - f.array()).matrix());
        const Eigen::VectorXd dz_i =
            d_i.cwiseProduct(i).cwiseProduct((1.0 - i.array()).matrix());
        const Eigen::VectorXd dz_g =
            d_g.cwiseProduct((1.0 - g.array().square()).matrix());
        const Eigen::VectorXd dz_o =
            d_o.cwiseProduct(o).cwiseProduct((1.0 - o.array()).matrix());

        grads.w_forget += dz_f * a.transpose();
        grads.w_input += dz_i * a.transpose();
        grads.w_cell += dz_g * a.transpose();
        grads.w_output += dz_o * a.transpose();
        grads.b_forget += dz_f;
        grads.b_input += dz_i;
        grads.b_cell += dz_g;
        grads.b_output += dz_o;

        const Eigen::VectorXd da = params.w_forget.transpose() * dz_f +
                                   params.w_input.transpose() * dz_i +
                                   params.w_cell.transpose() * dz_g +
                                   params.w_output.transpose() * dz_o;
        dh = da.head(n);
        dc = dc.cwiseProduct(f);
    }
    return grads;
}

void TrainConfig::validate() const {
    if (hidden_size < 1 || epochs < 1 || sequence_length < 1 || batch_size < 1) {
        throw ConfigError("lstm train config: counts must be positive");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("lstm train config: learning_rate must be > 0");
    }
}

Standardizer Standardizer::fit(std::span<const double> values) {
    Standardizer s;
    if (values.empty()) {
        return s;
    }
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             double(values.size());
    double var = 0.0;
    for (double v : values) {
        var += (v - s.mean) * (v - s.mean);
    }
    var /= double(values.size());
    s.scale = std::sqrt(var);
    if (s.scale < 1e-12) {
        s.scale = 1.0; // constant series: center only
    }
    return s;
}

namespace {

struct Window {
    std::vector<Eigen::VectorXd> inputs;
    double target = 0.0;
};

std::vector<Window> build_windows(std::span<const double> standardized,
                                  int sequence_length) {
    std::vector<Window> windows;
    const std::size_t len = static_cast<std::size_t>(sequence_length);
    if (standardized.size() <= len) {
        return windows;
    }
    windows.reserve(standardized.size() - len);
    for (std::size_t t = len; t < standardized.size(); ++t) {
        Window w;
        w.inputs.reserve(len);
        for (std::size_t j = t - len; j < t; ++j) {
            w.inputs.push_back(Eigen::VectorXd::Constant(1, standardized[j]));
        }
        w.target = standardized[t];
        windows.push_back(std::move(w));
    }
    return windows;
}

double full_pass_loss(const LstmParams& params, const std::vector<Window>& windows,
                      LossKind loss) {
    double total = 0.0;
    for (const Window& w : windows) {
        const double pred = lstm_forward(params, w.inputs).prediction;
        total += loss_value(loss, pred, w.target);
    }
    return total / double(windows.size());
}

} // namespace

LstmModel train_lstm(const ValueSeries& training, const TrainConfig& config) {
    config.validate();
    if (training.size() <= static_cast<std::size_t>(config.sequence_length) + 1) {
        throw ModelError("lstm: training window must exceed sequence_length + 1");
    }

    LstmModel model;
    model.config = config;
    model.norm = Standardizer::fit(training.values());

    std::vector<double> standardized(training.size());
    for (std::size_t i = 0; i < training.size(); ++i) {
        standardized[i] = model.norm.forward(training.value(i));
    }
    const std::vector<Window> windows =
        build_windows(standardized, config.sequence_length);

    std::mt19937_64 rng(config.seed);
    LstmParams params = LstmParams::random_init(config.hidden_size, 1, rng);

    LstmParams best = params;
    double best_loss = full_pass_loss(params, windows, config.loss);
    model.epoch_loss.push_back(best_loss);

    std::vector<std::size_t> order(windows.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);

        double epoch_loss = 0.0;
        try {
            for (std::size_t start = 0; start < order.size();
                 start += static_cast<std::size_t>(config.batch_size)) {
                const std::size_t end = std::min(
                    order.size(), start + static_cast<std::size_t>(config.batch_size));
                LstmGradients batch = LstmGradients::zeros(params);
                for (std::size_t k = start; k < end; ++k) {
                    const Window& w = windows[order[k]];
                    const LstmTrajectory traj = lstm_forward(params, w.inputs);
                    const LstmGradients g =
                        lstm_backward(params, traj, w.target, config.loss);
                    batch.add_scaled(g, 1.0 / double(end - start));
                }
                const double lr = config.learning_rate;
                params.w_forget -= lr * batch.w_forget;
                params.w_input -= lr * batch.w_input;
                params.w_cell -= lr * batch.w_cell;
                params.w_output -= lr * batch.w_output;
                params.b_forget -= lr * batch.b_forget;
                params.b_input -= lr * batch.b_input;
                params.b_cell -= lr * batch.b_cell;
                params.b_output -= lr * batch.b_output;
                params.w_dense -= lr * batch.w_dense;
                params.b_dense -= lr * batch.b_dense;
            }
            epoch_loss = full_pass_loss(params, windows, config.loss);
        } catch (const ModelError&) {
            // Forward validation caught non-finite parameters mid-epoch.
            throw TrainingDivergedError(
                "lstm: parameters became non-finite at epoch " + std::to_string(epoch),
                epoch);
        }
        if (!std::isfinite(epoch_loss)) {
            throw TrainingDivergedError(
                "lstm: training loss became non-finite at epoch " +
                    std::to_string(epoch),
                epoch);
        }
        model.epoch_loss.push_back(epoch_loss);
        if (epoch_loss < best_loss) {
            best_loss = epoch_loss;
            best = params;
        }
    }

    model.params = std::move(best);
    model.best_loss = best_loss;
    return model;
}

double lstm_predict(const LstmModel& model, const ValueSeries& history) {
    if (history.empty()) {
        throw EmptyDataError("lstm: cannot predict from an empty history");
    }
    const std::size_t len =
        std::min(history.size(), static_cast<std::size_t>(model.config.sequence_length));
    const auto values = history.values();
    std::vector<double> window(values.end() - len, values.end());
    for (double& v : window) {
        v = model.norm.forward(v);
    }
    const double z = lstm_forward_value(model.params, window);
    return model.norm.inverse(z);
}

std::string LstmForecaster::name() const {
    return "lstm" + std::to_string(config_.hidden_size);
}

double LstmForecaster::predict_next(const ValueSeries& history) const {
    if (!fitted_) {
        throw ModelError("lstm forecaster: predict_next before fit");
    }
    return lstm_predict(model_, history);
}

const LstmModel& LstmForecaster::model() const {
    if (!fitted_) {
        throw ModelError("lstm forecaster: model before fit");
    }
    return model_;
}

} // namespace fcast::models
