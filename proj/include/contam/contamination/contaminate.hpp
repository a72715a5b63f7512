#pragma once

#include "contam/core/matrix.hpp"
#include "contam/data/dataset.hpp"

#include "json.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contam::contamination {

/**
 * c0  flip labels of a random subset of one fixed class
 * c1  flip labels of a random subset drawn from all classes
 * c2  feature swapping: copy the features of another random row
 * cg  replace features with draws from N(mean, cov) of the clean training set
 * cc  replace features with multivariate-t(1) draws around a random center
 * cg100 / cc100  as cg / cc with the center multiplied by 100
 */
enum class Kind { c0, c1, c2, cg, cc, cg100, cc100 };

Kind parse_kind(const std::string& name);
std::string to_string(Kind kind);
bool alters_labels(Kind kind);

struct ContaminationSpec {
    Kind kind = Kind::c1;
    double epsilon = 0;
    std::optional<int> target_class;  // required for c0 only
    std::uint64_t seed = 0;

    void validate() const;
    nlohmann::json to_json() const;
    static ContaminationSpec from_json(const nlohmann::json& j);
};

struct ContaminationResult {
    data::LabeledDataset data;
    std::vector<bool> altered;

    std::size_t altered_count() const;
};

/// Exactly round(ε·n) rows (round(ε·n_target) for c0) altered, chosen without replacement.
ContaminationResult contaminate(const data::LabeledDataset& dataset, const ContaminationSpec& spec);

/// Rows μ + Z/W with Z ~ N(0, Σ) and W = sqrt(Gamma(shape 0.5, scale 2)), i.e. multivariate t with 1 dof.
Matrix sample_heavy_tail(std::span<const double> mu, const Eigen::MatrixXd& sigma, std::size_t n,
                         std::uint64_t seed);

Eigen::VectorXd empirical_mean(const Matrix& x);
/// Sample covariance with n-1 denominator (0 for a single row).
Eigen::MatrixXd empirical_covariance(const Matrix& x);

}  // namespace contam::contamination
