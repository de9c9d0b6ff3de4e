#pragma once

#include "fcast/core/series.hpp"

#include <string>
#include <vector>

namespace fcast::eval {

enum class SplitKind { Fraction, Yearly, WalkForward };

struct SplitSpec {
    SplitKind kind = SplitKind::Fraction;
    double train_fraction = 0.7; // Fraction
    std::size_t train_len = 0;   // WalkForward
    std::size_t step = 1;        // WalkForward

    void validate() const;
};

/// Half-open index ranges into one series. Train and test are disjoint and
/// the test range starts where (or after) the train range ends.
struct Fold {
    std::size_t train_begin = 0;
    std::size_t train_end = 0; // exclusive
    std::size_t test_begin = 0;
    std::size_t test_end = 0; // exclusive
    std::string label;

    std::size_t train_size() const { return train_end - train_begin; }
    std::size_t test_size() const { return test_end - test_begin; }
};

/// Fraction: one fold, contiguous prefix of floor(fraction * n) points.
/// Yearly: one fold per consecutive calendar-year pair (train y, test y+1).
/// WalkForward: rolling train_len-point windows advancing by step, each
/// testing the step points that follow.
/// Throws ConfigError when the series is too short for the spec.
std::vector<Fold> split(const ValueSeries& series, const SplitSpec& spec);

std::string describe(const SplitSpec& spec);

} // namespace fcast::eval
