#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fcast/core/errors.hpp"
#include "fcast/core/random_walk.hpp"
#include "fcast/models/lstm.hpp"
#include "fcast/models/serialize.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace fcast;
using namespace fcast::models;

namespace {

ValueSeries series_from(const std::vector<double>& values) {
    std::vector<Date> dates;
    Date d = synthetic_epoch();
    for (std::size_t i = 0; i < values.size(); ++i) {
        dates.push_back(d);
        d = d.next_weekday();
    }
    return ValueSeries(std::move(dates), values);
}

std::vector<Eigen::VectorXd> to_inputs(const std::vector<double>& values) {
    std::vector<Eigen::VectorXd> out;
    for (double v : values) {
        out.push_back(Eigen::VectorXd::Constant(1, v));
    }
    return out;
}

std::vector<double> flatten(const LstmGradients& g) {
    std::vector<double> out;
    for (const Eigen::MatrixXd* w : {&g.w_forget, &g.w_input, &g.w_cell, &g.w_output}) {
        out.insert(out.end(), w->data(), w->data() + w->size());
    }
    for (const Eigen::VectorXd* b : {&g.b_forget, &g.b_input, &g.b_cell, &g.b_output}) {
        out.insert(out.end(), b->data(), b->data() + b->size());
    }
    out.insert(out.end(), g.w_dense.data(), g.w_dense.data() + g.w_dense.size());
    out.push_back(g.b_dense);
    return out;
}

// Visits every scalar parameter in the same storage order flatten() uses,
// so finite-difference and analytic entries line up.
void for_each_param_data_order(LstmParams& p, const std::function<void(double&)>& fn) {
    for (Eigen::MatrixXd* w : {&p.w_forget, &p.w_input, &p.w_cell, &p.w_output}) {
        for (Eigen::Index i = 0; i < w->size(); ++i) {
            fn(*(w->data() + i));
        }
    }
    for (Eigen::VectorXd* b : {&p.b_forget, &p.b_input, &p.b_cell, &p.b_output}) {
        for (Eigen::Index i = 0; i < b->size(); ++i) {
            fn((*b)(i));
        }
    }
    for (Eigen::Index i = 0; i < p.w_dense.size(); ++i) {
        fn(p.w_dense(i));
    }
    fn(p.b_dense);
}

} // namespace

TEST_CASE("zero parameters predict exactly zero") {
    const LstmParams zero = LstmParams::zeros(6);
    const auto traj = lstm_forward(zero, to_inputs({1.0, -2.0, 3.5, 0.25}));
    CHECK(traj.prediction == 0.0);
}

TEST_CASE("hidden_size=1 forward matches a hand-unrolled scalar recurrence") {
    LstmParams p = LstmParams::zeros(1);
    // Hand-picked scalar weights: w_* = [w_h, w_x].
    p.w_forget << 0.3, -0.2;
    p.w_input << 0.1, 0.4;
    p.w_cell << -0.5, 0.7;
    p.w_output << 0.2, 0.6;
    p.b_forget << 0.05;
    p.b_input << -0.1;
    p.b_cell << 0.2;
    p.b_output << 0.0;
    p.w_dense << 1.5;
    p.b_dense = -0.25;

    const double x1 = 0.8, x2 = -0.3;

    const auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    double h = 0.0, c = 0.0;
    for (double x : {x1, x2}) {
        const double f = sig(0.3 * h + -0.2 * x + 0.05);
        const double i = sig(0.1 * h + 0.4 * x + -0.1);
        const double g = std::tanh(-0.5 * h + 0.7 * x + 0.2);
        const double o = sig(0.2 * h + 0.6 * x + 0.0);
        c = f * c + i * g;
        h = o * std::tanh(c);
    }
    const double expected = 1.5 * h - 0.25;

    const auto traj = lstm_forward(p, to_inputs({x1, x2}));
    CHECK(traj.prediction == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("forward pass guards") {
    const LstmParams p = LstmParams::zeros(2);
    CHECK_THROWS_AS(lstm_forward(p, {}), ModelError);
    CHECK_THROWS_AS(lstm_forward(p, {Eigen::VectorXd::Zero(3)}), ModelError);
}

TEST_CASE("analytic gradients match central finite differences") {
    // hidden 4, sequence length 8, five seeds; every parameter tensor.
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        LstmParams params = LstmParams::random_init(4, 1, rng);

        std::vector<double> sequence(8);
        for (double& v : sequence) {
            v = gauss(rng);
        }
        const double target = gauss(rng);
        const auto inputs = to_inputs(sequence);

        const auto traj = lstm_forward(params, inputs);
        const auto analytic =
            flatten(lstm_backward(params, traj, target, LossKind::SquaredError));

        std::vector<double> numeric;
        const double eps = 1e-5;
        for_each_param_data_order(params, [&](double& theta) {
            const double saved = theta;
            theta = saved + eps;
            const double up = loss_value(LossKind::SquaredError,
                                         lstm_forward(params, inputs).prediction, target);
            theta = saved - eps;
            const double down = loss_value(LossKind::SquaredError,
                                           lstm_forward(params, inputs).prediction, target);
            theta = saved;
            numeric.push_back((up - down) / (2.0 * eps));
        });

        REQUIRE(analytic.size() == numeric.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < analytic.size(); ++k) {
            const double denom = std::max(std::abs(analytic[k]) + std::abs(numeric[k]), 1e-4);
            worst = std::max(worst, std::abs(analytic[k] - numeric[k]) / denom);
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("gradients vanish when the prediction already equals the target") {
    std::mt19937_64 rng(9);
    LstmParams params = LstmParams::random_init(3, 1, rng);
    const auto inputs = to_inputs({0.5, -1.0, 0.75});
    const auto traj = lstm_forward(params, inputs);
    const auto grads =
        lstm_backward(params, traj, traj.prediction, LossKind::SquaredError);
    CHECK(grads.max_abs() < 1e-12);
}

TEST_CASE("backward pass is linear in the loss gradient (doubling doubles)") {
    std::mt19937_64 rng(13);
    LstmParams params = LstmParams::random_init(3, 1, rng);
    const auto inputs = to_inputs({0.4, 0.9, -0.2, 0.1});
    const auto traj = lstm_forward(params, inputs);

    const double target = 0.3;
    // Reflecting the target so the MSE derivative doubles must double every
    // gradient component.
    const double doubled_target = 2.0 * target - traj.prediction;
    const auto g1 = flatten(lstm_backward(params, traj, target, LossKind::SquaredError));
    const auto g2 =
        flatten(lstm_backward(params, traj, doubled_target, LossKind::SquaredError));
    for (std::size_t k = 0; k < g1.size(); ++k) {
        CHECK(g2[k] == doctest::Approx(2.0 * g1[k]).epsilon(1e-12));
    }
}

TEST_CASE("absolute-error gradients match finite differences away from the kink") {
    std::mt19937_64 rng(21);
    LstmParams params = LstmParams::random_init(2, 1, rng);
    const auto inputs = to_inputs({1.0, -0.5, 0.25});
    const auto traj = lstm_forward(params, inputs);
    const double target = traj.prediction + 0.5; // stay off |e| = 0

    const auto analytic =
        flatten(lstm_backward(params, traj, target, LossKind::AbsoluteError));
    std::vector<double> numeric;
    const double eps = 1e-6;
    for_each_param_data_order(params, [&](double& theta) {
        const double saved = theta;
        theta = saved + eps;
        const double up = loss_value(LossKind::AbsoluteError,
                                     lstm_forward(params, inputs).prediction, target);
        theta = saved - eps;
        const double down = loss_value(LossKind::AbsoluteError,
                                       lstm_forward(params, inputs).prediction, target);
        theta = saved;
        numeric.push_back((up - down) / (2.0 * eps));
    });
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        const double denom = std::max(std::abs(analytic[k]) + std::abs(numeric[k]), 1e-4);
        CHECK(std::abs(analytic[k] - numeric[k]) / denom < 1e-4);
    }
}

TEST_CASE("training on a constant series converges to the constant") {
    const auto series = series_from(std::vector<double>(120, 100.0));
    TrainConfig config;
    config.hidden_size = 4;
    config.epochs = 50;
    config.sequence_length = 5;
    config.batch_size = 16;
    config.seed = 3;
    const auto model = train_lstm(series, config);
    const double prediction = lstm_predict(model, series);
    CHECK(prediction == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("training is deterministic for a fixed seed") {
    GeneratorSpec spec;
    spec.volatility = 0.01;
    spec.length = 120;
    spec.seed = 8;
    const auto series = generate(spec);

    TrainConfig config;
    config.hidden_size = 3;
    config.epochs = 5;
    config.sequence_length = 6;
    config.seed = 42;

    const auto a = train_lstm(series, config);
    const auto b = train_lstm(series, config);
    CHECK(a.params.w_forget == b.params.w_forget);
    CHECK(a.params.w_input == b.params.w_input);
    CHECK(a.params.w_cell == b.params.w_cell);
    CHECK(a.params.w_output == b.params.w_output);
    CHECK(a.params.b_forget == b.params.b_forget);
    CHECK(a.params.b_input == b.params.b_input);
    CHECK(a.params.b_cell == b.params.b_cell);
    CHECK(a.params.b_output == b.params.b_output);
    CHECK(a.params.w_dense == b.params.w_dense);
    CHECK(a.params.b_dense == b.params.b_dense);
    CHECK(a.epoch_loss == b.epoch_loss);
}

TEST_CASE("best-so-far training loss is non-increasing and retained") {
    GeneratorSpec spec;
    spec.volatility = 0.02;
    spec.length = 150;
    spec.seed = 15;
    const auto series = generate(spec);

    TrainConfig config;
    config.hidden_size = 4;
    config.epochs = 12;
    config.sequence_length = 8;
    config.seed = 7;
    const auto model = train_lstm(series, config);

    double running = model.epoch_loss.front();
    for (double loss : model.epoch_loss) {
        running = std::min(running, loss);
    }
    CHECK(model.best_loss == running);

    double best_so_far = model.epoch_loss.front();
    for (double loss : model.epoch_loss) {
        best_so_far = std::min(best_so_far, loss);
        CHECK(best_so_far <= model.epoch_loss.front());
    }
}

TEST_CASE("absurd learning rates diverge loudly, with the epoch named") {
    GeneratorSpec spec;
    spec.volatility = 0.02;
    spec.length = 100;
    spec.seed = 2;
    const auto series = generate(spec);

    TrainConfig config;
    config.hidden_size = 4;
    config.epochs = 5;
    config.sequence_length = 5;
    config.learning_rate = 1e300;
    config.seed = 1;
    CHECK_THROWS_AS(train_lstm(series, config), TrainingDivergedError);
    try {
        train_lstm(series, config);
    } catch (const TrainingDivergedError& e) {
        CHECK(e.epoch() >= 1);
        CHECK(e.epoch() <= config.epochs);
    }
}

TEST_CASE("prediction guards") {
    TrainConfig config;
    config.sequence_length = 5;
    CHECK_THROWS_AS(train_lstm(series_from({1.0, 2.0, 3.0}), config), ModelError);

    LstmModel model;
    model.params = LstmParams::zeros(2);
    model.config = config;
    CHECK_THROWS_AS(lstm_predict(model, ValueSeries{}), EmptyDataError);
}

TEST_CASE("lstm model serializes and loads back bit-identically") {
    const auto series = series_from(std::vector<double>{
        100, 101, 99.5, 102, 103, 101.5, 100.25, 104, 105, 103.5, 102, 106,
        107, 105.5, 104.25, 108, 109, 107.5, 106, 110});
    TrainConfig config;
    config.hidden_size = 2;
    config.epochs = 2;
    config.sequence_length = 4;
    config.seed = 11;
    const auto model = train_lstm(series, config);

    const auto doc = to_json(model);
    CHECK(doc.at("format_version") == kModelFormatVersion);
    const auto loaded = lstm_model_from_json(doc);
    CHECK(loaded.params.w_forget == model.params.w_forget);
    CHECK(loaded.params.w_dense == model.params.w_dense);
    CHECK(loaded.params.b_dense == model.params.b_dense);
    CHECK(loaded.norm.mean == model.norm.mean);
    CHECK(loaded.norm.scale == model.norm.scale);

    // Same predictions through the loaded model.
    CHECK(lstm_predict(loaded, series) == lstm_predict(model, series));

    auto broken = doc;
    broken["format_version"] = 999;
    CHECK_THROWS_AS(lstm_model_from_json(broken), FormatError);
}
