#pragma once

#include "contam/bounds/bounds.hpp"
#include "contam/harness/config.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace contam::harness {

/// Aggregate over every (split, instance) pair of one (kind, ε).
struct CellResult {
    contamination::Kind kind = contamination::Kind::c1;
    double epsilon = 0;
    double mean_loss = 0;  // contaminated-train error minus clean-train error
    double stderr_loss = 0;
    double mean_error = 0;
    std::optional<double> mean_excess;  // mean_error - R̂*, synthetic sources only
    double bound_2class = 0;
    std::optional<double> bound_multiclass;  // J > 2 only
    std::size_t n_instances = 0;  // completed runs
    std::size_t n_failed = 0;
    bool incomplete = false;
};

struct ExperimentReport {
    std::vector<CellResult> cells;  // kind-major, ε-minor, in config order
    double clean_error = 0;         // mean over splits
    std::vector<double> clean_errors;
    std::optional<double> bayes_risk;  // Monte Carlo estimate for synthetic sources
    int class_count = 2;
    std::uint64_t seed = 0;
    std::string config_hash;
    nlohmann::json config;
    std::vector<std::string> failures;  // one line per failed run

    bool complete() const;
    nlohmann::json to_json() const;
};

/**
 * Contaminate each training set, retrain, score on the untouched test set.
 * Runs are independent jobs on `config.workers` threads; results are
 * aggregated in job order, so output does not depend on the pool size.
 * A run that throws is logged in `failures` and its cell marked incomplete.
 */
ExperimentReport run_contamination_experiment(const ExperimentConfig& config);

/// Seed of one run, reproducible in isolation.
std::uint64_t run_seed(std::uint64_t master, contamination::Kind kind, double epsilon, std::size_t instance,
                       std::size_t split);

/// Clean (train, test) pairs the experiment iterates over, after optional scaling.
std::vector<std::pair<data::LabeledDataset, data::LabeledDataset>> materialize_splits(const ExperimentConfig& config);

struct BoundComparisonConfig {
    GaussianMixtureSource mixture;
    std::vector<double> epsilons{0.01, 0.02, 0.03, 0.04, 0.05, 0.10};
    clf::ClassifierConfig classifier;  // λ proxy
    clf::ClassifierConfig probe;       // domain discriminator for d̂
    double delta = 0.05;
    std::uint64_t seed = 0;
};

struct BoundComparisonRow {
    bounds::BoundReport bound;
    double probe_error = 0;
};

/**
 * Two-class bound against the domain-adaptation bound for a Cauchy (cc)
 * contaminated source and clean target of n_train rows each. d̂ comes
 * from a trained domain probe. λ is the sum of the held-out errors of
 * one classifier per domain, each trained on half of that domain. VC
 * dimension p + 1 and m' = n_train.
 */
std::vector<BoundComparisonRow> run_bound_comparison(const BoundComparisonConfig& config);

}  // namespace contam::harness
