#include "contam/contamination/worst_case.hpp"

#include "contam/core/error.hpp"
#include "contam/core/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace contam::contamination {

WorstCaseContamination::WorstCaseContamination(synth::MixtureOracle base, std::size_t n_quad)
    : base_(std::move(base)) {
    if (base_.dim() != 1) throw DomainError("worst-case construction needs a 1-dimensional oracle");
    if (n_quad < 16) throw DomainError("n_quad must be >= 16");
    const double sd = std::sqrt(base_.sigma()(0, 0));
    const double lo = std::min(base_.mean_pos()(0), base_.mean_neg()(0)) - 8 * sd;
    const double hi = std::max(base_.mean_pos()(0), base_.mean_neg()(0)) + 8 * sd;
    const double step = (hi - lo) / static_cast<double>(n_quad - 1);

    grid_.resize(n_quad);
    std::vector<double> abs_eta_g(n_quad);
    for (std::size_t k = 0; k < n_quad; ++k) {
        grid_[k] = lo + step * static_cast<double>(k);
        const double x[] = {grid_[k]};
        abs_eta_g[k] = std::abs(base_.posterior(x)) * base_.density(x);
    }
    double integral = 0;
    for (std::size_t k = 1; k < n_quad; ++k) integral += 0.5 * step * (abs_eta_g[k - 1] + abs_eta_g[k]);
    // Closed form when it exists, so ε* agrees with critical_epsilon(R*) to rounding.
    bayes_risk_ = base_.prior() == 0.5 ? synth::bayes_risk_equal_prior(base_) : 0.5 - integral;
    if (bayes_risk_ >= 0.5 - 1e-6) throw DomainError("degenerate problem: Bayes risk is 0.5");
    epsilon_star_ = (0.5 - bayes_risk_) / (1 - bayes_risk_);

    const double norm = 1 - 2 * bayes_risk_;
    cdf_.assign(n_quad, 0.0);
    for (std::size_t k = 1; k < n_quad; ++k) {
        cdf_[k] = cdf_[k - 1] + 0.5 * step * 2 * (abs_eta_g[k - 1] + abs_eta_g[k]) / norm;
    }
    h_mass_ = cdf_.back();
}

double WorstCaseContamination::h_density(std::span<const double> x) const {
    return 2 * std::abs(base_.posterior(x)) * base_.density(x) / (1 - 2 * bayes_risk_);
}

double WorstCaseContamination::eta_h(std::span<const double> x) const {
    return base_.posterior(x) < 0 ? 0.5 : -0.5;
}

DensityFn WorstCaseContamination::h_fn() const {
    return [this](std::span<const double> x) { return h_density(x); };
}

PosteriorFn WorstCaseContamination::eta_h_fn() const {
    return [this](std::span<const double> x) { return eta_h(x); };
}

std::vector<double> WorstCaseContamination::sample_h(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed, 0x4);
    std::vector<double> out(n);
    for (auto& v : out) {
        const double u = rng.uniform() * h_mass_;
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf_.begin(), 1,
                                                                           static_cast<std::ptrdiff_t>(cdf_.size() - 1)));
        const double width = cdf_[k] - cdf_[k - 1];
        const double t = width > 0 ? (u - cdf_[k - 1]) / width : 0.5;
        v = grid_[k - 1] + t * (grid_[k] - grid_[k - 1]);
    }
    return out;
}

WorstCaseContamination worst_case_contamination(const synth::MixtureOracle& oracle, std::size_t n_quad) {
    return WorstCaseContamination(oracle, n_quad);
}

double contamination_weight(double g, double h, double epsilon) {
    if (!(epsilon >= 0 && epsilon < 1)) throw DomainError("epsilon must lie in [0,1)");
    if (g == 0 && h == 0) throw DomainError("point outside support: g(x) = h(x) = 0");
    const double contaminated = epsilon * h;
    return contaminated / ((1 - epsilon) * g + contaminated);
}

double contaminated_posterior(const synth::MixtureOracle& oracle, const DensityFn& h_density,
                              const PosteriorFn& eta_h, double epsilon, std::span<const double> x) {
    const double alpha = contamination_weight(oracle.density(x), h_density(x), epsilon);
    const double eta = oracle.posterior(x);
    if (alpha == 0) return eta;
    return (1 - alpha) * eta + alpha * eta_h(x);
}

double excess_risk_contaminated_bayes(const synth::MixtureOracle& oracle, const DensityFn& h_density,
                                      const PosteriorFn& eta_h, double epsilon, std::size_t n_mc,
                                      std::uint64_t seed, std::size_t workers) {
    if (n_mc == 0) throw DomainError("n_mc must be >= 1");
    constexpr std::size_t kShard = 1 << 15;
    const std::size_t shards = (n_mc + kShard - 1) / kShard;
    std::vector<double> partial(shards, 0.0);
    const Rng root(seed, 0xE8);
    parallel_for(shards, workers, [&](std::size_t s) {
        Rng rng = root.substream(s);
        std::vector<double> x(oracle.dim());
        const std::size_t count = std::min(kShard, n_mc - s * kShard);
        double acc = 0;
        for (std::size_t i = 0; i < count; ++i) {
            oracle.draw(rng, x);
            const double eta = oracle.posterior(x);
            const double eta_tilde = contaminated_posterior(oracle, h_density, eta_h, epsilon, x);
            const bool flipped = eta * eta_tilde < 0 || (eta != 0 && std::abs(eta_tilde) <= 1e-9 * std::abs(eta));
            if (flipped) acc += 2 * std::abs(eta);
        }
        partial[s] = acc;
    });
    double total = 0;
    for (double p : partial) total += p;
    return total / static_cast<double>(n_mc);
}

}  // namespace contam::contamination
