#include "contam/synthgen/mixture.hpp"

#include "contam/core/error.hpp"
#include "contam/core/parallel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace contam::synth {

Eigen::MatrixXd ridged_cholesky(const Eigen::MatrixXd& sigma) {
    const auto p = sigma.rows();
    if (p == 0 || sigma.cols() != p) throw SchemaError("covariance must be square and non-empty");
    const double trace = sigma.trace();
    if (!(trace > 0)) return Eigen::MatrixXd::Zero(p, p);
    Eigen::LLT<Eigen::MatrixXd> exact(sigma);
    if (exact.info() == Eigen::Success && exact.matrixL().toDenseMatrix().diagonal().minCoeff() > 0) {
        return exact.matrixL();
    }
    double ridge = 1e-10 * trace / static_cast<double>(p);
    for (int attempt = 0; attempt < 12; ++attempt, ridge *= 10) {
        Eigen::MatrixXd adjusted = sigma;
        adjusted.diagonal().array() += ridge;
        Eigen::LLT<Eigen::MatrixXd> llt(adjusted);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw DomainError("covariance is not positive semi-definite");
}

MixtureOracle::MixtureOracle(Eigen::VectorXd mean_pos, Eigen::VectorXd mean_neg, Eigen::MatrixXd sigma,
                             double prior)
    : mean_pos_(std::move(mean_pos)), mean_neg_(std::move(mean_neg)), sigma_(std::move(sigma)), prior_(prior) {
    const auto p = mean_pos_.size();
    if (p == 0 || mean_neg_.size() != p || sigma_.rows() != p || sigma_.cols() != p) {
        throw SchemaError("mixture oracle dimensions disagree");
    }
    if (!(prior_ > 0 && prior_ < 1)) throw DomainError("mixture prior must lie in (0,1)");
    if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1 + sigma_.cwiseAbs().maxCoeff())) {
        throw DomainError("covariance must be symmetric");
    }
    chol_ = ridged_cholesky(sigma_);
    if (chol_.diagonal().minCoeff() <= 0) throw DomainError("covariance is degenerate");
    const double log_det = 2.0 * chol_.diagonal().array().log().sum();
    log_norm_ = -0.5 * (static_cast<double>(p) * std::log(2 * std::numbers::pi) + log_det);
}

MixtureOracle MixtureOracle::one_dimensional(double mean, double stddev, double prior) {
    return MixtureOracle(Eigen::VectorXd::Constant(1, mean), Eigen::VectorXd::Constant(1, -mean),
                         Eigen::MatrixXd::Constant(1, 1, stddev * stddev), prior);
}

double MixtureOracle::class_log_density(std::span<const double> x, int label) const {
    if (x.size() != dim()) throw SchemaError("point dimension mismatch");
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd d = xv - (label == 1 ? mean_pos_ : mean_neg_);
    const Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(d);
    return log_norm_ - 0.5 * z.squaredNorm();
}

double MixtureOracle::log_odds(std::span<const double> x) const {
    return std::log(prior_) - std::log1p(-prior_) + class_log_density(x, 1) - class_log_density(x, 0);
}

double MixtureOracle::log_density(std::span<const double> x) const {
    const double a = std::log(prior_) + class_log_density(x, 1);
    const double b = std::log1p(-prior_) + class_log_density(x, 0);
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double MixtureOracle::density(std::span<const double> x) const { return std::exp(log_density(x)); }

double MixtureOracle::posterior(std::span<const double> x) const {
    // sigmoid(z) - 0.5 == 0.5·tanh(z/2), finite for every z
    return 0.5 * std::tanh(0.5 * log_odds(x));
}

int MixtureOracle::draw(Rng& rng, std::span<double> x) const {
    const int label = rng.uniform() < prior_ ? 1 : 0;
    std::normal_distribution<double> normal;
    const auto p = static_cast<Eigen::Index>(dim());
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k) z(k) = normal(rng);
    const Eigen::VectorXd v = (label == 1 ? mean_pos_ : mean_neg_) + chol_.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index k = 0; k < p; ++k) x[static_cast<std::size_t>(k)] = v(k);
    return label;
}

data::LabeledDataset MixtureOracle::sample(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw DomainError("sample size must satisfy n >= 1");
    Rng rng(seed, 0x6D6978);
    Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim()));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = draw(rng, row_span(features, i));
    return data::LabeledDataset(std::move(features), std::move(labels), 2);
}

nlohmann::json MixtureOracle::to_json() const {
    nlohmann::json j;
    j["mean_pos"] = std::vector<double>(mean_pos_.data(), mean_pos_.data() + mean_pos_.size());
    j["mean_neg"] = std::vector<double>(mean_neg_.data(), mean_neg_.data() + mean_neg_.size());
    std::vector<std::vector<double>> rows;
    for (Eigen::Index r = 0; r < sigma_.rows(); ++r) {
        rows.emplace_back();
        for (Eigen::Index c = 0; c < sigma_.cols(); ++c) rows.back().push_back(sigma_(r, c));
    }
    j["sigma"] = rows;
    j["prior"] = prior_;
    return j;
}

MixtureOracle MixtureOracle::from_json(const nlohmann::json& j) {
    try {
        const auto mp = j.at("mean_pos").get<std::vector<double>>();
        const auto mn = j.at("mean_neg").get<std::vector<double>>();
        const auto rows = j.at("sigma").get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd sigma(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.size()) throw SchemaError("sigma must be square");
            for (std::size_t c = 0; c < rows.size(); ++c) {
                sigma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        return MixtureOracle(Eigen::Map<const Eigen::VectorXd>(mp.data(), static_cast<Eigen::Index>(mp.size())),
                             Eigen::Map<const Eigen::VectorXd>(mn.data(), static_cast<Eigen::Index>(mn.size())),
                             sigma, j.value("prior", 0.5));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("mixture oracle JSON: ") + e.what());
    }
}

Eigen::MatrixXd random_gram_covariance(std::size_t p, std::uint64_t seed_a) {
    Rng rng(seed_a, 0xA);
    const auto dim = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = rng.uniform();
    }
    return a.transpose() * a;
}

std::pair<data::LabeledDataset, MixtureOracle> gen_gaussian_mixture(std::size_t p, std::span<const double> mu,
                                                                     std::uint64_t seed_a, std::size_t n,
                                                                     std::uint64_t seed) {
    if (p == 0) throw DomainError("dimension must satisfy p >= 1");
    if (n == 0) throw DomainError("sample size must satisfy n >= 1");
    if (mu.size() != p) throw SchemaError("mu must have length p");
    const Eigen::Map<const Eigen::VectorXd> m(mu.data(), static_cast<Eigen::Index>(p));
    MixtureOracle oracle(m, -m, random_gram_covariance(p, seed_a), 0.5);
    auto ds = oracle.sample(n, seed);
    return {std::move(ds), std::move(oracle)};
}

double mixture_posterior(const MixtureOracle& oracle, std::span<const double> x) { return oracle.posterior(x); }

DecisionFn bayes_decision(const MixtureOracle& oracle) {
    return [&oracle](std::span<const double> x) { return oracle.posterior(x); };
}

RiskEstimate monte_carlo_risk_both(const MixtureOracle& oracle, const DecisionFn& decision, std::size_t n_mc,
                                   std::uint64_t seed, std::size_t workers) {
    if (n_mc == 0) throw DomainError("n_mc must be >= 1");
    constexpr std::size_t kShard = 1 << 15;
    const std::size_t shards = (n_mc + kShard - 1) / kShard;
    struct Partial {
        double errors = 0, signed_eta = 0, abs_eta = 0;
    };
    std::vector<Partial> partial(shards);
    const Rng root(seed, 0x4D43);
    parallel_for(shards, workers, [&](std::size_t s) {
        Rng rng = root.substream(s);
        std::vector<double> x(oracle.dim());
        const std::size_t count = std::min(kShard, n_mc - s * kShard);
        Partial acc;
        for (std::size_t i = 0; i < count; ++i) {
            const int y = oracle.draw(rng, x);
            const double f = decision(x);
            const int predicted = f > 0 ? 1 : 0;
            const double sign = f > 0 ? 1.0 : -1.0;
            const double eta = oracle.posterior(x);
            acc.errors += predicted != y ? 1.0 : 0.0;
            acc.signed_eta += eta * sign;
            acc.abs_eta += std::abs(eta);
        }
        partial[s] = acc;
    });
    Partial total;
    for (const auto& p : partial) {
        total.errors += p.errors;
        total.signed_eta += p.signed_eta;
        total.abs_eta += p.abs_eta;
    }
    const auto n = static_cast<double>(n_mc);
    return {total.errors / n, 0.5 - total.signed_eta / n, total.abs_eta / n, n_mc};
}

double monte_carlo_risk(const MixtureOracle& oracle, const DecisionFn& decision, std::size_t n_mc,
                        std::uint64_t seed, RiskMethod method) {
    const auto r = monte_carlo_risk_both(oracle, decision, n_mc, seed);
    return method == RiskMethod::direct ? r.direct : r.identity;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bayes_risk_equal_prior(const MixtureOracle& oracle) {
    const Eigen::VectorXd d = oracle.mean_pos() - oracle.mean_neg();
    const Eigen::VectorXd z = oracle.cholesky().triangularView<Eigen::Lower>().solve(d);
    return normal_cdf(-0.5 * z.norm());
}

}  // namespace contam::synth
