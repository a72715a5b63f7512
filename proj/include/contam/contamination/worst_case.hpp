#pragma once

#include "contam/core/rng.hpp"
#include "contam/synthgen/mixture.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace contam::contamination {

using DensityFn = std::function<double(std::span<const double>)>;
/// Bayes decision function of the contaminating distribution, values in [-0.5, 0.5].
using PosteriorFn = std::function<double(std::span<const double>)>;

/**
 * Contaminating distribution that attains the loss bound for a 1-d oracle.
 *
 * h(x) = 2|η(x)|g(x) / (1 - 2R*) has unit mass because E|η| = 0.5 - R*.
 * The labeling of H is anti-Bayes: P_H(Y=1|x) = 1 where η(x) < 0, else 0.
 * At ε* = (0.5 - R*)/(1 - R*) the contaminated posterior vanishes a.e. and
 * any ε above ε* flips the Bayes rule at every point.
 */
class WorstCaseContamination {
public:
    WorstCaseContamination(synth::MixtureOracle base, std::size_t n_quad);

    const synth::MixtureOracle& base() const { return base_; }
    double bayes_risk() const { return bayes_risk_; }
    double epsilon_star() const { return epsilon_star_; }

    double h_density(std::span<const double> x) const;
    double eta_h(std::span<const double> x) const;
    DensityFn h_fn() const;
    PosteriorFn eta_h_fn() const;

    /// Trapezoid integral of h over the quadrature grid.
    double h_mass() const { return h_mass_; }
    const std::vector<double>& grid() const { return grid_; }

    /// Inverse-CDF draws from h, linear within grid cells.
    std::vector<double> sample_h(std::size_t n, std::uint64_t seed) const;

private:
    synth::MixtureOracle base_;
    double bayes_risk_ = 0;
    double epsilon_star_ = 0;
    double h_mass_ = 0;
    std::vector<double> grid_;
    std::vector<double> cdf_;
};

/// Grid of n_quad points over [min mean - 8σ, max mean + 8σ]; throws if R* >= 0.5 - 1e-6.
WorstCaseContamination worst_case_contamination(const synth::MixtureOracle& oracle, std::size_t n_quad = 4096);

/// α_ε(x) = εh / ((1-ε)g + εh); throws DomainError where g = h = 0.
double contamination_weight(double g, double h, double epsilon);

/// η̃ = (1 - α_ε)η + α_ε η^H.
double contaminated_posterior(const synth::MixtureOracle& oracle, const DensityFn& h_density,
                              const PosteriorFn& eta_h, double epsilon, std::span<const double> x);

/**
 * R(η̃) - R* = 2·E_G[|η|·1{contaminated rule disagrees with Bayes}] by Monte Carlo.
 *
 * A point counts as disagreeing when η·η̃ < 0, and also when η̃ vanishes
 * (|η̃| <= 1e-9·|η|) while η does not: there the contaminated rule is
 * indifferent and the worst-case tie resolution is taken.
 */
double excess_risk_contaminated_bayes(const synth::MixtureOracle& oracle, const DensityFn& h_density,
                                      const PosteriorFn& eta_h, double epsilon, std::size_t n_mc,
                                      std::uint64_t seed, std::size_t workers = 1);

}  // namespace contam::contamination
