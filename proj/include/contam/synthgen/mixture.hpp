#pragma once

#include "contam/core/matrix.hpp"
#include "contam/core/rng.hpp"
#include "contam/data/dataset.hpp"

#include "json.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <functional>
#include <span>
#include <utility>

namespace contam::synth {

/// Decision function f; the induced rule predicts class 1 iff f(x) > 0.
using DecisionFn = std::function<double(std::span<const double>)>;

/// Cholesky factor of Σ; if Σ is singular, of Σ + r·I with r escalating from 1e-10·trace(Σ)/p.
Eigen::MatrixXd ridged_cholesky(const Eigen::MatrixXd& sigma);

/**
 * Two Gaussian components with a shared covariance:
 * X | Y=1 ~ N(mean_pos, Σ), X | Y=0 ~ N(mean_neg, Σ), P(Y=1) = prior.
 *
 * Provides closed-form densities and the Bayes decision function
 * η(x) = P(Y=1 | X=x) - 0.5, evaluated from log densities so it stays
 * finite far in the tails.
 */
class MixtureOracle {
public:
    MixtureOracle(Eigen::VectorXd mean_pos, Eigen::VectorXd mean_neg, Eigen::MatrixXd sigma, double prior = 0.5);

    /// Symmetric 1-d oracle N(+m, s²) vs N(-m, s²).
    static MixtureOracle one_dimensional(double mean, double stddev = 1.0, double prior = 0.5);

    std::size_t dim() const { return static_cast<std::size_t>(mean_pos_.size()); }
    double prior() const { return prior_; }
    const Eigen::VectorXd& mean_pos() const { return mean_pos_; }
    const Eigen::VectorXd& mean_neg() const { return mean_neg_; }
    const Eigen::MatrixXd& sigma() const { return sigma_; }
    const Eigen::MatrixXd& cholesky() const { return chol_; }

    /// log N(x; mean of class `label`, Σ).
    double class_log_density(std::span<const double> x, int label) const;
    /// Marginal density g(x) and its log.
    double log_density(std::span<const double> x) const;
    double density(std::span<const double> x) const;
    /// η(x) in [-0.5, 0.5].
    double posterior(std::span<const double> x) const;

    /// Draws (x, y) pairs; one substream per call.
    data::LabeledDataset sample(std::size_t n, std::uint64_t seed) const;
    /// Draws a single labeled point from `rng` into `x`, returns the label.
    int draw(Rng& rng, std::span<double> x) const;

    nlohmann::json to_json() const;
    static MixtureOracle from_json(const nlohmann::json& j);

private:
    double log_odds(std::span<const double> x) const;

    Eigen::VectorXd mean_pos_;
    Eigen::VectorXd mean_neg_;
    Eigen::MatrixXd sigma_;
    double prior_;
    Eigen::MatrixXd chol_;
    double log_norm_ = 0;  // -0.5·(p·log 2π + log det Σ)
};

/// Σ = AᵀA with A_ij ~ U[0,1] drawn from `seed_a`.
Eigen::MatrixXd random_gram_covariance(std::size_t p, std::uint64_t seed_a);

/**
 * Δ ~ Bernoulli(1/2), label = Δ, x ~ N((2Δ-1)·mu, AᵀA).
 * Returns the sample together with its exact oracle.
 */
std::pair<data::LabeledDataset, MixtureOracle> gen_gaussian_mixture(std::size_t p, std::span<const double> mu,
                                                                     std::uint64_t seed_a, std::size_t n,
                                                                     std::uint64_t seed);

double mixture_posterior(const MixtureOracle& oracle, std::span<const double> x);

/// The Bayes decision function η as a DecisionFn.
DecisionFn bayes_decision(const MixtureOracle& oracle);

enum class RiskMethod { direct, identity };

struct RiskEstimate {
    double direct = 0;  // fraction of draws where the rule disagrees with the sampled label
    double identity = 0;  // 0.5 - mean(η(X)·sign f(X))
    double mean_abs_eta = 0;
    std::size_t draws = 0;
};

/// Both estimators on shared draws. Draws are split into fixed-size shards
/// with distinct substreams; the result does not depend on `workers`.
RiskEstimate monte_carlo_risk_both(const MixtureOracle& oracle, const DecisionFn& decision, std::size_t n_mc,
                                   std::uint64_t seed, std::size_t workers = 1);

double monte_carlo_risk(const MixtureOracle& oracle, const DecisionFn& decision, std::size_t n_mc,
                        std::uint64_t seed, RiskMethod method);

/// Φ(x), standard normal CDF.
double normal_cdf(double x);

/// Exact Bayes risk Φ(-½·‖L⁻¹(μ₁-μ₀)‖) for equal priors and shared Σ.
double bayes_risk_equal_prior(const MixtureOracle& oracle);

}  // namespace contam::synth
