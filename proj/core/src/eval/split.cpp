#include "fcast/eval/split.hpp"
#include "fcast/core/errors.hpp"

#include <cmath>
#include <sstream>

namespace fcast::eval {

void SplitSpec::validate() const {
    switch (kind) {
    case SplitKind::Fraction:
        if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
            throw ConfigError("split: train_fraction must lie in (0, 1)");
        }
        return;
    case SplitKind::Yearly:
        return;
    case SplitKind::WalkForward:
        if (train_len < 2) {
            throw ConfigError("split: walk-forward train_len must be >= 2");
        }
        if (step < 1) {
            throw ConfigError("split: walk-forward step must be >= 1");
        }
        return;
    }
    throw ConfigError("split: unknown kind");
}

std::vector<Fold> split(const ValueSeries& series, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = series.size();
    std::vector<Fold> folds;

    switch (spec.kind) {
    case SplitKind::Fraction: {
        const std::size_t train =
            static_cast<std::size_t>(std::floor(spec.train_fraction * double(n)));
        if (train < 1 || train >= n) {
            throw ConfigError("split: series too short for fraction split");
        }
        std::ostringstream label;
        label << "fraction " << spec.train_fraction << " (" << train << "/"
              << (n - train) << ")";
        folds.push_back(Fold{0, train, train, n, label.str()});
        return folds;
    }
    case SplitKind::Yearly: {
        if (n == 0) {
            throw ConfigError("split: empty series");
        }
        // Contiguous index range of each calendar year present.
        std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> years;
        for (std::size_t i = 0; i < n; ++i) {
            const int y = series.date(i).year();
            if (years.empty() || years.back().first != y) {
                years.push_back({y, {i, i + 1}});
            } else {
                years.back().second.second = i + 1;
            }
        }
        for (std::size_t k = 0; k + 1 < years.size(); ++k) {
            if (years[k + 1].first != years[k].first + 1) {
                continue; // gap year: no consecutive pair
            }
            Fold fold;
            fold.train_begin = years[k].second.first;
            fold.train_end = years[k].second.second;
            fold.test_begin = years[k + 1].second.first;
            fold.test_end = years[k + 1].second.second;
            fold.label = std::to_string(years[k].first) + "-" +
                         std::to_string(years[k + 1].first);
            folds.push_back(fold);
        }
        if (folds.empty()) {
            throw ConfigError("split: need two consecutive calendar years");
        }
        return folds;
    }
    case SplitKind::WalkForward: {
        if (n < spec.train_len + 1) {
            throw ConfigError("split: series too short for walk-forward spec");
        }
        for (std::size_t start = 0; start + spec.train_len < n; start += spec.step) {
            Fold fold;
            fold.train_begin = start;
            fold.train_end = start + spec.train_len;
            fold.test_begin = fold.train_end;
            fold.test_end = std::min(n, fold.test_begin + spec.step);
            fold.label = "walk[" + std::to_string(start) + "]";
            folds.push_back(fold);
        }
        return folds;
    }
    }
    throw ConfigError("split: unknown kind");
}

std::string describe(const SplitSpec& spec) {
    std::ostringstream out;
    switch (spec.kind) {
    case SplitKind::Fraction:
        out << "fraction(train=" << spec.train_fraction << ")";
        break;
    case SplitKind::Yearly:
        out << "yearly-segments";
        break;
    case SplitKind::WalkForward:
        out << "walk-forward(train_len=" << spec.train_len << ",step=" << spec.step
            << ")";
        break;
    }
    return out.str();
}

} // namespace fcast::eval
