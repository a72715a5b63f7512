#include "contam/classifiers/classifier.hpp"

#include "contam/classifiers/knn.hpp"
#include "contam/core/error.hpp"

namespace contam::clf {

SvmParams ClassifierConfig::svm_params(std::size_t p) const {
    SvmParams params;
    const double g = gamma.value_or(1.0 / static_cast<double>(p));
    switch (kernel) {
        case KernelSpec::Type::rbf: params.kernel = KernelSpec::rbf(g); break;
        case KernelSpec::Type::linear: params.kernel = KernelSpec::linear(); break;
        case KernelSpec::Type::polynomial: params.kernel = KernelSpec::polynomial(degree, g, coef0); break;
    }
    params.C = C;
    params.tol = tol;
    params.max_passes = max_passes;
    params.seed = seed;
    return params;
}

nlohmann::json ClassifierConfig::to_json() const {
    nlohmann::json j;
    if (type == Type::knn) {
        j["type"] = "knn";
        j["k"] = k;
        return j;
    }
    j["type"] = "svm";
    j["kernel"] = to_string(kernel);
    if (gamma) j["gamma"] = *gamma;
    if (kernel == KernelSpec::Type::polynomial) {
        j["degree"] = degree;
        j["coef0"] = coef0;
    }
    j["C"] = C;
    j["tol"] = tol;
    j["max_passes"] = max_passes;
    j["seed"] = seed;
    return j;
}

ClassifierConfig ClassifierConfig::from_json(const nlohmann::json& j) {
    ClassifierConfig c;
    try {
        const auto type = j.value("type", std::string("svm"));
        if (type == "knn") {
            c.type = Type::knn;
            c.k = j.value("k", std::size_t{0});
            return c;
        }
        if (type != "svm") throw SchemaError("unknown classifier type '" + type + "'");
        const auto kernel = j.value("kernel", std::string("rbf"));
        if (kernel == "rbf") {
            c.kernel = KernelSpec::Type::rbf;
        } else if (kernel == "linear") {
            c.kernel = KernelSpec::Type::linear;
        } else if (kernel == "polynomial") {
            c.kernel = KernelSpec::Type::polynomial;
        } else {
            throw SchemaError("unknown kernel '" + kernel + "'");
        }
        if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
        c.degree = j.value("degree", 3);
        c.coef0 = j.value("coef0", 0.0);
        c.C = j.value("C", 10.0);
        c.tol = j.value("tol", 1e-3);
        c.max_passes = j.value("max_passes", std::size_t{1000});
        c.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("classifier JSON: ") + e.what());
    }
    if (!(c.C > 0)) throw DomainError("C must be > 0");
    if (!(c.tol > 0)) throw DomainError("tol must be > 0");
    return c;
}

int KnnModel::predict(std::span<const double> x) const { return knn_classify(train, x, k); }

int TrainedClassifier::predict(std::span<const double> x) const {
    return std::visit([&](const auto& m) { return m.predict(x); }, model_);
}

std::vector<int> TrainedClassifier::predict(const Matrix& x) const {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = predict(row_span(x, i));
    return out;
}

bool TrainedClassifier::converged() const {
    if (const auto* s = svm()) return s->converged();
    return true;
}

nlohmann::json TrainedClassifier::to_json() const {
    if (const auto* s = svm()) return s->to_json();
    const auto& m = *knn();
    nlohmann::json j;
    j["type"] = "knn";
    j["k"] = m.k;
    j["class_count"] = m.train.class_count();
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.train.size(); ++i) {
        const auto r = m.train.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["features"] = std::move(rows);
    j["labels"] = m.train.labels();
    return j;
}

TrainedClassifier TrainedClassifier::from_json(const nlohmann::json& j) {
    const auto type = j.value("type", std::string("svm"));
    if (type == "svm") return TrainedClassifier(SvmModel::from_json(j));
    if (type != "knn") throw SchemaError("unknown model type '" + type + "'");
    try {
        const auto rows = j.at("features").get<std::vector<std::vector<double>>>();
        auto labels = j.at("labels").get<std::vector<int>>();
        if (rows.empty()) throw SchemaError("knn model without rows");
        Matrix f(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.front().size()) throw SchemaError("ragged knn feature rows");
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        KnnModel m{data::LabeledDataset(std::move(f), std::move(labels), j.at("class_count").get<int>()),
                   j.at("k").get<std::size_t>()};
        return TrainedClassifier(std::move(m));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("knn model JSON: ") + e.what());
    }
}

TrainedClassifier train_classifier(const ClassifierConfig& config, const data::LabeledDataset& train) {
    if (config.type == ClassifierConfig::Type::knn) {
        const std::size_t k = config.k == 0 ? default_k(train.size()) : config.k;
        if (k > train.size()) throw DomainError("k exceeds training size");
        return TrainedClassifier(KnnModel{train, k});
    }
    return TrainedClassifier(svm_train(train, config.svm_params(train.dim())));
}

}  // namespace contam::clf
