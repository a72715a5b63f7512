#pragma once

#include "json.hpp"

#include <span>
#include <string>

namespace contam::clf {

struct KernelSpec {
    enum class Type { linear, rbf, polynomial };

    Type type = Type::rbf;
    double gamma = 1.0;  // rbf width; polynomial scale
    int degree = 3;
    double coef0 = 0.0;

    static KernelSpec linear() { return {Type::linear, 0.0, 1, 0.0}; }
    static KernelSpec rbf(double gamma) { return {Type::rbf, gamma, 1, 0.0}; }
    static KernelSpec polynomial(int degree, double gamma, double coef0) {
        return {Type::polynomial, gamma, degree, coef0};
    }

    void validate() const;
    double operator()(std::span<const double> a, std::span<const double> b) const;

    nlohmann::json to_json() const;
    static KernelSpec from_json(const nlohmann::json& j);
};

std::string to_string(KernelSpec::Type type);

}  // namespace contam::clf
