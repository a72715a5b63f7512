#pragma once

#include "contam/classifiers/svm.hpp"
#include "contam/data/dataset.hpp"

#include "json.hpp"

#include <optional>
#include <variant>

namespace contam::clf {

/// Classifier choice plus hyperparameters, as read from experiment configs.
struct ClassifierConfig {
    enum class Type { svm, knn };

    Type type = Type::svm;
    KernelSpec::Type kernel = KernelSpec::Type::rbf;
    std::optional<double> gamma;  // unset: 1/p
    int degree = 3;
    double coef0 = 0.0;
    double C = 10.0;
    double tol = 1e-3;
    std::size_t max_passes = 1000;
    std::size_t k = 0;  // 0: ⌊√n⌋
    std::uint64_t seed = 0;

    SvmParams svm_params(std::size_t p) const;

    nlohmann::json to_json() const;
    static ClassifierConfig from_json(const nlohmann::json& j);
};

struct KnnModel {
    data::LabeledDataset train;
    std::size_t k = 1;

    int predict(std::span<const double> x) const;
};

class TrainedClassifier {
public:
    explicit TrainedClassifier(SvmModel m) : model_(std::move(m)) {}
    explicit TrainedClassifier(KnnModel m) : model_(std::move(m)) {}

    int predict(std::span<const double> x) const;
    std::vector<int> predict(const Matrix& x) const;
    bool converged() const;

    const SvmModel* svm() const { return std::get_if<SvmModel>(&model_); }
    const KnnModel* knn() const { return std::get_if<KnnModel>(&model_); }

    nlohmann::json to_json() const;
    static TrainedClassifier from_json(const nlohmann::json& j);

private:
    std::variant<SvmModel, KnnModel> model_;
};

TrainedClassifier train_classifier(const ClassifierConfig& config, const data::LabeledDataset& train);

}  // namespace contam::clf
