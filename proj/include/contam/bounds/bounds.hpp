#pragma once

#include "json.hpp"

#include <optional>
#include <span>

namespace contam::bounds {

/// ε/(1-ε) for ε in [0,1).
double two_class_bound(double epsilon);

/**
 * (ε/(1-ε))·{1 + (w₂+…+w_J)α + (w₃+…+w_J)α² + … + (w_{J-1}+w_J)α^{J-2}},
 * α = 1 - ε/(1-ε). `weights` must be sorted descending and sum to 1; for
 * J = 2 the series is empty and the result equals two_class_bound.
 * ε must lie in [0, 0.5).
 */
double multi_class_bound(double epsilon, std::span<const double> weights);

/// (0.5 - R*)/(1 - R*) for R* in [0, 0.5).
double critical_epsilon(double bayes_risk);

struct BenDavidInputs {
    double d_hat = 0;       // empirical HΔH divergence in [0, 2]
    int vc_dim = 1;
    long long m_prime = 1;  // unlabeled sample size per domain
    double delta = 0.05;
    double lambda = 0;
};

/// ½·d̂ + 4·sqrt((2d·ln(2m') + ln(2/δ))/m') + λ, natural logarithm.
double ben_david_bound(const BenDavidInputs& in);

/// Clip used when plotting the domain-adaptation bound next to ours.
inline constexpr double kBenDavidPlotCeiling = 0.5;

struct BoundReport {
    double epsilon = 0;
    double two_class_bound = 0;
    std::optional<double> multi_class_bound;
    std::optional<double> ben_david_bound;
    std::optional<BenDavidInputs> ben_david_inputs;

    nlohmann::json to_json() const;
};

}  // namespace contam::bounds
