#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fcast/core/errors.hpp"
#include "fcast/core/random_walk.hpp"
#include "fcast/models/glm.hpp"
#include "fcast/models/martingale.hpp"
#include "fcast/models/serialize.hpp"

#include <cmath>
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

double sse_at(double intercept, double slope, const ValueSeries& series) {
    double total = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double mu = std::exp(intercept + slope * std::log(series.value(t - 1)));
        const double e = series.value(t) - mu;
        total += e * e;
    }
    return total;
}

} // namespace

TEST_CASE("fit_glm recovers noiseless multiplicative growth") {
    std::vector<double> values{100.0};
    for (int i = 1; i < 60; ++i) {
        values.push_back(values.back() * std::exp(0.001));
    }
    const auto fit = fit_glm(series_from(values));
    CHECK(fit.converged);
    CHECK(fit.intercept == doctest::Approx(0.001).epsilon(1e-6));
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fit_glm on a constant series predicts the constant") {
    const auto series = series_from(std::vector<double>(30, 100.0));
    const auto fit = fit_glm(series);
    CHECK(fit.converged);
    CHECK(glm_predict(fit, series) == doctest::Approx(100.0).epsilon(1e-8));
}

TEST_CASE("fit_glm beats every point of a likelihood grid") {
    GeneratorSpec spec;
    spec.kind = WalkKind::Geometric;
    spec.drift = 0.0;
    spec.volatility = 0.01;
    spec.initial = 100.0;
    spec.length = 500;
    spec.seed = 77;
    const auto series = generate(spec);

    const auto fit = fit_glm(series);
    CHECK(fit.converged);
    const double fit_sse = sse_at(fit.intercept, fit.slope, series);

    // 41x41 grid around the returned fit; Gaussian likelihood is monotone
    // in -SSE, so the MLE must not lose to any grid point.
    for (int i = -20; i <= 20; ++i) {
        for (int j = -20; j <= 20; ++j) {
            const double b0 = fit.intercept + double(i) * (0.01 / 20.0);
            const double b1 = fit.slope + double(j) * (0.05 / 20.0);
            const double grid_sse = sse_at(b0, b1, series);
            CHECK(fit_sse <= grid_sse * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("glm_predict closed forms") {
    CHECK(glm_predict_value(GlmFit{0.0, 1.0, 0, true}, 250.0) == 250.0);
    CHECK(glm_predict_value(GlmFit{std::log(1.01), 1.0, 0, true}, 100.0) ==
          doctest::Approx(101.0).epsilon(1e-12));
}

TEST_CASE("glm_predict equals an independent recomputation on random inputs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int k = 0; k < 50; ++k) {
        GlmFit fit;
        fit.intercept = u(rng) - 1.25;
        fit.slope = u(rng);
        const double last = 100.0 * u(rng);
        const double expected = std::exp(fit.intercept + fit.slope * std::log(last));
        CHECK(glm_predict_value(fit, last) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("glm driftless reduction is the martingale, exactly") {
    const GlmFit driftless{0.0, 1.0, 0, true};
    const auto series = series_from({95.0, 102.5, 99.125});
    CHECK(glm_predict(driftless, series) == martingale_predict(series));
}

TEST_CASE("glm error paths") {
    SUBCASE("nonpositive training value") {
        std::vector<double> values(30, 50.0);
        values[7] = -1.0;
        CHECK_THROWS_AS(fit_glm(series_from(values)), ModelError);
    }
    SUBCASE("too short") {
        CHECK_THROWS_AS(fit_glm(series_from({1.0, 2.0, 3.0})), ModelError);
    }
    SUBCASE("nonpositive last value at prediction") {
        CHECK_THROWS_AS(glm_predict_value(GlmFit{0.0, 1.0, 0, true}, 0.0),
                        ModelError);
    }
}

TEST_CASE("glm fit serializes and loads back") {
    GlmFit fit;
    fit.intercept = -5e-5;
    fit.slope = 1.000012;
    fit.iterations = 3;
    fit.converged = true;
    const auto loaded = glm_fit_from_json(to_json(fit));
    CHECK(loaded.intercept == fit.intercept);
    CHECK(loaded.slope == fit.slope);
    CHECK(loaded.iterations == fit.iterations);
    CHECK(loaded.converged == fit.converged);
}
