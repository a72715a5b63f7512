#include "contam/bounds/bounds.hpp"

#include "contam/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace contam::bounds {

double two_class_bound(double epsilon) {
    if (!(epsilon >= 0 && epsilon < 1)) throw DomainError("epsilon must lie in [0,1)");
    return epsilon / (1 - epsilon);
}

double multi_class_bound(double epsilon, std::span<const double> weights) {
    if (!(epsilon >= 0 && epsilon < 0.5)) throw DomainError("multi-class bound needs epsilon in [0, 0.5)");
    if (weights.size() < 2) throw DomainError("multi-class bound needs at least two class weights");
    double total = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!(weights[j] >= 0)) throw DomainError("class weights must be non-negative");
        if (j > 0 && weights[j] > weights[j - 1]) throw DomainError("class weights must be sorted descending");
        total += weights[j];
    }
    if (std::abs(total - 1) > 1e-9) throw DomainError("class weights must sum to 1");

    const double base = two_class_bound(epsilon);
    const double alpha = 1 - base;
    // tail[k] = w_{k+1} + ... + w_J (1-based k), used for terms k = 2..J-1
    double series = 1;
    double power = 1;
    for (std::size_t k = 1; k + 1 < weights.size(); ++k) {
        power *= alpha;
        double tail = 0;
        for (std::size_t m = k; m < weights.size(); ++m) tail += weights[m];
        series += tail * power;
    }
    return base * series;
}

double critical_epsilon(double bayes_risk) {
    if (!(bayes_risk >= 0 && bayes_risk < 0.5)) throw DomainError("Bayes risk must lie in [0, 0.5)");
    return (0.5 - bayes_risk) / (1 - bayes_risk);
}

double ben_david_bound(const BenDavidInputs& in) {
    if (!(in.d_hat >= 0 && in.d_hat <= 2)) throw DomainError("d_hat must lie in [0, 2]");
    if (in.vc_dim < 1) throw DomainError("VC dimension must be >= 1");
    if (in.m_prime < 1) throw DomainError("m' must be >= 1");
    if (!(in.delta > 0 && in.delta < 1)) throw DomainError("delta must lie in (0, 1)");
    if (!(in.lambda >= 0)) throw DomainError("lambda must be >= 0");
    const auto m = static_cast<double>(in.m_prime);
    const double complexity =
        4 * std::sqrt((2 * in.vc_dim * std::log(2 * m) + std::log(2 / in.delta)) / m);
    return 0.5 * in.d_hat + complexity + in.lambda;
}

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j{{"epsilon", epsilon}, {"two_class_bound", two_class_bound}};
    j["multi_class_bound"] = multi_class_bound ? nlohmann::json(*multi_class_bound) : nlohmann::json();
    if (ben_david_bound) {
        j["ben_david_bound"] = *ben_david_bound;
        j["ben_david_bound_plot"] = std::min(*ben_david_bound, kBenDavidPlotCeiling);
    }
    if (ben_david_inputs) {
        j["ben_david_inputs"] = {{"d_hat", ben_david_inputs->d_hat},
                                 {"vc_dim", ben_david_inputs->vc_dim},
                                 {"m_prime", ben_david_inputs->m_prime},
                                 {"delta", ben_david_inputs->delta},
                                 {"lambda", ben_david_inputs->lambda}};
    }
    return j;
}

}  // namespace contam::bounds
