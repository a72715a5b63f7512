#include "contam/classifiers/evaluate.hpp"

#include "contam/core/error.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace contam::clf {

EvalResult evaluate(std::span<const int> predictions, const data::LabeledDataset& test) {
    if (predictions.size() != test.size()) throw SchemaError("prediction count does not match test size");
    const auto J = static_cast<std::size_t>(test.class_count());
    EvalResult r;
    r.n = test.size();
    r.confusion.assign(J, std::vector<std::size_t>(J, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int p = predictions[i];
        if (p < 0 || static_cast<std::size_t>(p) >= J) throw SchemaError("prediction outside class range");
        ++r.confusion[static_cast<std::size_t>(test.label(i))][static_cast<std::size_t>(p)];
        if (p == test.label(i)) ++correct;
    }
    r.error_rate = 1.0 - static_cast<double>(correct) / static_cast<double>(r.n);
    for (std::size_t c = 0; c < J; ++c) {
        std::size_t support = 0;
        for (auto v : r.confusion[c]) support += v;
        r.per_class_accuracy.push_back(support == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                    : static_cast<double>(r.confusion[c][c]) /
                                                          static_cast<double>(support));
    }
    return r;
}

EvalResult evaluate(const PredictFn& predict, const data::LabeledDataset& test) {
    std::vector<int> predictions(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) predictions[i] = predict(test.row(i));
    return evaluate(predictions, test);
}

std::string format_accuracy_percent(double accuracy) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * accuracy);
    return buf;
}

}  // namespace contam::clf
