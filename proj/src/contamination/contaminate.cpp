#include "contam/contamination/contaminate.hpp"

#include "contam/core/error.hpp"
#include "contam/core/rng.hpp"
#include "contam/synthgen/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace contam::contamination {

namespace {

constexpr std::pair<Kind, const char*> kKindNames[] = {
    {Kind::c0, "c0"}, {Kind::c1, "c1"}, {Kind::c2, "c2"},       {Kind::cg, "cg"},
    {Kind::cc, "cc"}, {Kind::cg100, "cg100"}, {Kind::cc100, "cc100"},
};

std::size_t rounded_count(double epsilon, std::size_t n) {
    return static_cast<std::size_t>(std::lround(epsilon * static_cast<double>(n)));
}

// m distinct elements of `pool` chosen uniformly, returned sorted.
std::vector<std::size_t> choose(std::vector<std::size_t> pool, std::size_t m, Rng& rng) {
    for (std::size_t i = 0; i < m; ++i) {
        std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    }
    pool.resize(m);
    std::sort(pool.begin(), pool.end());
    return pool;
}

Matrix gaussian_rows(const Eigen::VectorXd& center, const Eigen::MatrixXd& chol, std::size_t n, Rng& rng) {
    std::normal_distribution<double> normal;
    const auto p = center.size();
    Matrix out(static_cast<Eigen::Index>(n), p);
    Eigen::VectorXd z(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < p; ++k) z(k) = normal(rng);
        out.row(static_cast<Eigen::Index>(i)) = (center + chol.triangularView<Eigen::Lower>() * z).transpose();
    }
    return out;
}

Matrix heavy_tail_rows(const Eigen::VectorXd& center, const Eigen::MatrixXd& chol, std::size_t n, Rng& rng) {
    std::normal_distribution<double> normal;
    std::gamma_distribution<double> gamma(0.5, 2.0);
    const auto p = center.size();
    Matrix out(static_cast<Eigen::Index>(n), p);
    Eigen::VectorXd z(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < p; ++k) z(k) = normal(rng);
        double w = 0;
        while (!(w > 0)) w = std::sqrt(gamma(rng));
        out.row(static_cast<Eigen::Index>(i)) =
            (center + (chol.triangularView<Eigen::Lower>() * z) / w).transpose();
    }
    return out;
}

}  // namespace

Kind parse_kind(const std::string& name) {
    for (const auto& [k, s] : kKindNames) {
        if (name == s) return k;
    }
    throw SchemaError("unknown contamination kind '" + name + "'");
}

std::string to_string(Kind kind) {
    for (const auto& [k, s] : kKindNames) {
        if (k == kind) return s;
    }
    return "?";
}

bool alters_labels(Kind kind) { return kind == Kind::c0 || kind == Kind::c1; }

void ContaminationSpec::validate() const {
    if (!(epsilon >= 0 && epsilon < 1)) throw DomainError("epsilon must lie in [0,1)");
    if (kind == Kind::c0 && !target_class) throw SchemaError("c0 requires target_class");
    if (kind != Kind::c0 && target_class) throw SchemaError("target_class is only valid for c0");
}

nlohmann::json ContaminationSpec::to_json() const {
    nlohmann::json j{{"kind", to_string(kind)}, {"epsilon", epsilon}, {"seed", seed}};
    if (target_class) j["target_class"] = *target_class;
    return j;
}

ContaminationSpec ContaminationSpec::from_json(const nlohmann::json& j) {
    ContaminationSpec s;
    try {
        s.kind = parse_kind(j.at("kind").get<std::string>());
        s.epsilon = j.at("epsilon").get<double>();
        s.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("target_class")) s.target_class = j.at("target_class").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("contamination spec JSON: ") + e.what());
    }
    s.validate();
    return s;
}

std::size_t ContaminationResult::altered_count() const {
    return static_cast<std::size_t>(std::count(altered.begin(), altered.end(), true));
}

Eigen::VectorXd empirical_mean(const Matrix& x) { return x.colwise().mean().transpose(); }

Eigen::MatrixXd empirical_covariance(const Matrix& x) {
    const auto n = x.rows();
    if (n < 2) return Eigen::MatrixXd::Zero(x.cols(), x.cols());
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(n - 1);
}

Matrix sample_heavy_tail(std::span<const double> mu, const Eigen::MatrixXd& sigma, std::size_t n,
                         std::uint64_t seed) {
    if (n == 0) throw DomainError("sample size must satisfy n >= 1");
    if (static_cast<Eigen::Index>(mu.size()) != sigma.rows()) throw SchemaError("mu/Sigma dimension mismatch");
    Rng rng(seed, 0xCA);
    const Eigen::Map<const Eigen::VectorXd> center(mu.data(), static_cast<Eigen::Index>(mu.size()));
    return heavy_tail_rows(center, synth::ridged_cholesky(sigma), n, rng);
}

ContaminationResult contaminate(const data::LabeledDataset& dataset, const ContaminationSpec& spec) {
    spec.validate();
    const std::size_t n = dataset.size();
    const int classes = dataset.class_count();
    Rng rng(spec.seed, 0xC0 + static_cast<std::uint64_t>(spec.kind));

    std::vector<std::size_t> pool;
    if (spec.kind == Kind::c0) {
        const int target = *spec.target_class;
        if (target < 0 || target >= classes) throw SchemaError("target_class outside label range");
        for (std::size_t i = 0; i < n; ++i) {
            if (dataset.label(i) == target) pool.push_back(i);
        }
        if (pool.empty()) throw DomainError("c0 target class " + std::to_string(target) + " is empty");
    } else {
        pool.resize(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
    }
    const std::size_t m = rounded_count(spec.epsilon, pool.size());
    if (m > pool.size()) throw DomainError("epsilon selects more rows than available");
    const auto selected = choose(std::move(pool), m, rng);

    Matrix features = dataset.features();
    std::vector<int> labels = dataset.labels();
    std::vector<bool> altered(n, false);
    for (auto i : selected) altered[i] = true;

    switch (spec.kind) {
        case Kind::c0:
        case Kind::c1:
            for (auto i : selected) {
                const auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes - 1)));
                labels[i] = r >= labels[i] ? r + 1 : r;
            }
            break;
        case Kind::c2:
            if (n < 2 && m > 0) throw DomainError("feature swapping needs at least two rows");
            for (auto i : selected) {
                auto partner = static_cast<std::size_t>(rng.below(n - 1));
                if (partner >= i) ++partner;
                features.row(static_cast<Eigen::Index>(i)) = dataset.features().row(static_cast<Eigen::Index>(partner));
            }
            break;
        case Kind::cg:
        case Kind::cg100:
        case Kind::cc:
        case Kind::cc100: {
            if (m == 0) break;
            const Matrix& clean = dataset.features();
            const Eigen::MatrixXd chol = synth::ridged_cholesky(empirical_covariance(clean));
            const double scale = (spec.kind == Kind::cg100 || spec.kind == Kind::cc100) ? 100.0 : 1.0;
            Eigen::VectorXd center;
            Matrix replacement;
            if (spec.kind == Kind::cg || spec.kind == Kind::cg100) {
                center = empirical_mean(clean) * scale;
                replacement = gaussian_rows(center, chol, m, rng);
            } else {
                // one center per instance, uniform over each coordinate's [min, max]
                center.resize(clean.cols());
                for (Eigen::Index j = 0; j < clean.cols(); ++j) {
                    const double lo = clean.col(j).minCoeff();
                    const double hi = clean.col(j).maxCoeff();
                    center(j) = scale * (lo + (hi - lo) * rng.uniform());
                }
                replacement = heavy_tail_rows(center, chol, m, rng);
            }
            for (std::size_t r = 0; r < m; ++r) {
                features.row(static_cast<Eigen::Index>(selected[r])) = replacement.row(static_cast<Eigen::Index>(r));
            }
            break;
        }
    }
    return {dataset.with(std::move(features), std::move(labels)), std::move(altered)};
}

}  // namespace contam::contamination
