#pragma once

#include "contam/classifiers/kernel.hpp"
#include "contam/core/matrix.hpp"
#include "contam/data/dataset.hpp"

#include "json.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace contam::clf {

struct SvmParams {
    KernelSpec kernel = KernelSpec::rbf(1.0);
    double C = 10.0;
    double tol = 1e-3;
    /// Iteration cap is max_passes · n pair updates.
    std::size_t max_passes = 1000;
    std::uint64_t seed = 0;
    std::size_t cache_bytes = std::size_t{256} << 20;
    /// Keep the dual objective after every update (debug aid; O(n) per step).
    bool record_objective = false;
    /// Threads for one-vs-one subproblems.
    std::size_t workers = 1;
};

/// Solution of one soft-margin dual on ±1 targets.
struct DualSolution {
    std::vector<double> alpha;
    double bias = 0;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> objective_trace;
};

/**
 * Sequential pairwise optimization of
 *   max Σα_i - ½ΣΣ α_i α_j y_i y_j K(x_i, x_j)  s.t. 0 <= α_i <= C, Σα_i y_i = 0.
 *
 * Each step takes the maximal violating pair (the pair with the largest
 * gradient gap |E_i - E_j| among feasible directions), solves it in closed
 * form and updates the gradient. A seeded random partner replaces the second
 * index when the greedy pair makes no progress. Stops once the gap drops
 * below tol. Kernel rows come from an LRU cache bounded by cache_bytes.
 */
DualSolution solve_dual(const Matrix& x, std::span<const int> y, const KernelSpec& kernel, double C, double tol,
                        std::size_t max_iterations, std::uint64_t seed, std::size_t cache_bytes,
                        bool record_objective);

struct BinarySvm {
    int negative_class = 0;  // decision < 0 side; y = -1
    int positive_class = 1;  // decision > 0 side; y = +1
    Matrix support_vectors;
    std::vector<double> coef;  // α_i·y_i per support vector
    std::vector<std::size_t> support_indices;  // rows of the training set handed to svm_train
    double bias = 0;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> objective_trace;

    double decision(std::span<const double> x, const KernelSpec& kernel) const;
};

class SvmModel {
public:
    KernelSpec kernel;
    double C = 0;
    int class_count = 2;
    std::size_t dim = 0;
    /// One machine per unordered pair of classes present in training (one-vs-one).
    std::vector<BinarySvm> machines;

    bool converged() const;

    /// Σ α_i y_i K(x_i, x) + b of the first machine (the only one for two classes).
    double decision(std::span<const double> x) const;

    /// Majority vote; ties go to the larger summed |decision| of the winning
    /// contests, then to the lower class id.
    int predict(std::span<const double> x) const;
    std::vector<int> predict(const Matrix& x) const;

    nlohmann::json to_json() const;
    static SvmModel from_json(const nlohmann::json& j);
};

/// Throws SchemaError when fewer than two classes are present.
SvmModel svm_train(const data::LabeledDataset& train, const SvmParams& params);

/// Post-hoc optimality audit of a trained model against its training set.
struct DualCheck {
    double max_kkt_violation = 0;  // worst margin violation, in decision units
    double equality_residual = 0;  // max over machines of |Σ α_i y_i|
    bool box_feasible = true;      // 0 ≤ α_i ≤ C everywhere
};

DualCheck check_dual(const SvmModel& model, const data::LabeledDataset& train);

}  // namespace contam::clf
