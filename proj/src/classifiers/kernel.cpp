#include "contam/classifiers/kernel.hpp"

#include "contam/core/error.hpp"

#include <cmath>

namespace contam::clf {

void KernelSpec::validate() const {
    if (type == Type::rbf && !(gamma > 0)) throw DomainError("rbf gamma must be > 0");
    if (type == Type::polynomial && degree < 1) throw DomainError("polynomial degree must be >= 1");
}

double KernelSpec::operator()(std::span<const double> a, std::span<const double> b) const {
    const std::size_t p = a.size();
    switch (type) {
        case Type::rbf: {
            double d2 = 0;
            for (std::size_t k = 0; k < p; ++k) {
                const double d = a[k] - b[k];
                d2 += d * d;
            }
            return std::exp(-gamma * d2);
        }
        case Type::linear: {
            double dot = 0;
            for (std::size_t k = 0; k < p; ++k) dot += a[k] * b[k];
            return dot;
        }
        case Type::polynomial: {
            double dot = 0;
            for (std::size_t k = 0; k < p; ++k) dot += a[k] * b[k];
            const double base = gamma * dot + coef0;
            double out = 1;
            for (int d = 0; d < degree; ++d) out *= base;
            return out;
        }
    }
    return 0;
}

std::string to_string(KernelSpec::Type type) {
    switch (type) {
        case KernelSpec::Type::linear: return "linear";
        case KernelSpec::Type::rbf: return "rbf";
        case KernelSpec::Type::polynomial: return "polynomial";
    }
    return "?";
}

nlohmann::json KernelSpec::to_json() const {
    nlohmann::json j{{"type", to_string(type)}};
    if (type != Type::linear) j["gamma"] = gamma;
    if (type == Type::polynomial) {
        j["degree"] = degree;
        j["coef0"] = coef0;
    }
    return j;
}

KernelSpec KernelSpec::from_json(const nlohmann::json& j) {
    KernelSpec k;
    try {
        const auto t = j.at("type").get<std::string>();
        if (t == "linear") {
            k = linear();
        } else if (t == "rbf") {
            k = rbf(j.at("gamma").get<double>());
        } else if (t == "polynomial") {
            k = polynomial(j.value("degree", 3), j.value("gamma", 1.0), j.value("coef0", 0.0));
        } else {
            throw SchemaError("unknown kernel type '" + t + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("kernel JSON: ") + e.what());
    }
    k.validate();
    return k;
}

}  // namespace contam::clf
