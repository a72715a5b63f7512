#pragma once

#include "contam/data/dataset.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace contam::clf {

struct EvalResult {
    double error_rate = 0;
    /// confusion[true][predicted]
    std::vector<std::vector<std::size_t>> confusion;
    /// NaN for classes absent from the test set.
    std::vector<double> per_class_accuracy;
    std::size_t n = 0;

    double accuracy() const { return 1.0 - error_rate; }
};

using PredictFn = std::function<int(std::span<const double>)>;

EvalResult evaluate(const PredictFn& predict, const data::LabeledDataset& test);
EvalResult evaluate(std::span<const int> predictions, const data::LabeledDataset& test);

/// Accuracy as a percentage with two decimals, e.g. "98.13".
std::string format_accuracy_percent(double accuracy);

}  // namespace contam::clf
