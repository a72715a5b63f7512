#pragma once

#include "contam/classifiers/classifier.hpp"
#include "contam/core/matrix.hpp"

#include <cstdint>

namespace contam::bounds {

struct DivergenceEstimate {
    double d_hat = 0;
    double probe_error = 0;  // held-out domain-discrimination error
};

/**
 * Domain-discrimination proxy for the HΔH divergence: source rows get label 0,
 * target rows label 1, the probe trains on a stratified half and is scored
 * on the other half; d̂ = 2·(1 - 2·min(err, 1 - err)).
 */
DivergenceEstimate estimate_h_delta_h(const Matrix& source, const Matrix& target,
                                      const clf::ClassifierConfig& probe, std::uint64_t seed);

}  // namespace contam::bounds
