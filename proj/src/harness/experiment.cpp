#include "contam/harness/experiment.hpp"

#include "contam/bounds/divergence.hpp"
#include "contam/classifiers/evaluate.hpp"
#include "contam/core/error.hpp"
#include "contam/core/parallel.hpp"
#include "contam/core/rng.hpp"
#include "contam/raster/scene_io.hpp"
#include "contam/synthgen/mixture.hpp"

#include <bit>
#include <cmath>
#include <numeric>

namespace contam::harness {
namespace {

using Pair = std::pair<data::LabeledDataset, data::LabeledDataset>;

std::vector<double> mixture_mu(const GaussianMixtureSource& g) {
    return g.mu.empty() ? std::vector<double>(g.p, 0.5) : g.mu;
}

synth::MixtureOracle mixture_oracle(const GaussianMixtureSource& g) {
    const auto mu = mixture_mu(g);
    Eigen::Map<const Eigen::VectorXd> m(mu.data(), static_cast<Eigen::Index>(mu.size()));
    return synth::MixtureOracle(m, -m, synth::random_gram_covariance(g.p, g.seed_a));
}

data::LabeledDataset load_pool(const ExperimentConfig& config) {
    if (const auto* p = std::get_if<PatternSource>(&config.dataset)) {
        return synth::gen_pattern(p->kind, p->n, derive_seed({config.seed, 0x9A77}));
    }
    if (const auto* c = std::get_if<CsvSource>(&config.dataset)) {
        return data::load_csv(c->path, {c->label_column, c->class_count, std::nullopt});
    }
    if (const auto* r = std::get_if<RasterSource>(&config.dataset)) {
        return raster::scene_to_dataset(raster::read_scene(r->path));
    }
    throw std::logic_error("source has no pooled dataset");
}

std::vector<Pair> raw_splits(const ExperimentConfig& config) {
    std::vector<Pair> out;
    if (const auto* g = std::get_if<GaussianMixtureSource>(&config.dataset)) {
        const auto oracle = mixture_oracle(*g);
        for (std::size_t r = 0; r < config.repetitions; ++r) {
            out.emplace_back(oracle.sample(g->n_train, derive_seed({config.seed, 0x7EA1, r})),
                             oracle.sample(g->n_test, derive_seed({config.seed, 0x7E57, r})));
        }
        return out;
    }
    if (std::holds_alternative<GivenSplit>(config.split)) {
        const auto& c = std::get<CsvSource>(config.dataset);
        const data::CsvOptions opts{c.label_column, c.class_count, std::nullopt};
        auto train = data::load_csv(c.path, opts);
        auto test = data::load_csv(*c.test_path, {c.label_column, train.class_count(), std::nullopt});
        for (std::size_t r = 0; r < config.repetitions; ++r) out.emplace_back(train, test);
        return out;
    }
    const auto pool = load_pool(config);
    const data::SplitMode mode = std::holds_alternative<data::KFold>(config.split)
                                     ? data::SplitMode{std::get<data::KFold>(config.split)}
                                     : data::SplitMode{std::get<data::Holdout>(config.split)};
    for (std::size_t r = 0; r < config.repetitions; ++r) {
        for (auto& p : data::split(pool, mode, derive_seed({config.seed, 0x5B17, r}))) out.push_back(std::move(p));
    }
    return out;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double test_error(const clf::TrainedClassifier& model, const data::LabeledDataset& test) {
    return clf::evaluate(model.predict(test.features()), test).error_rate;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master, contamination::Kind kind, double epsilon, std::size_t instance,
                       std::size_t split) {
    return derive_seed({master, static_cast<std::uint64_t>(kind), std::bit_cast<std::uint64_t>(epsilon), instance,
                        split});
}

std::vector<Pair> materialize_splits(const ExperimentConfig& config) {
    config.validate();
    auto splits = raw_splits(config);
    if (config.scale) {
        for (auto& [train, test] : splits) {
            const auto params = data::fit_unit_interval(train);
            train = params.apply(train);
            test = params.apply(test);
        }
    }
    return splits;
}

bool ExperimentReport::complete() const {
    return std::none_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.incomplete; });
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json cj = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json j = {{"kind", contamination::to_string(c.kind)},
                            {"epsilon", c.epsilon},
                            {"mean_loss", c.mean_loss},
                            {"stderr", c.stderr_loss},
                            {"mean_error", c.mean_error},
                            {"bound_2class", c.bound_2class},
                            {"n_instances", c.n_instances},
                            {"n_failed", c.n_failed},
                            {"incomplete", c.incomplete}};
        j["bound_multiclass"] = c.bound_multiclass ? nlohmann::json(*c.bound_multiclass) : nlohmann::json();
        j["mean_excess_over_bayes"] = c.mean_excess ? nlohmann::json(*c.mean_excess) : nlohmann::json();
        cj.push_back(std::move(j));
    }
    return {{"config", config},
            {"config_hash", config_hash},
            {"seed", seed},
            {"class_count", class_count},
            {"clean_error", clean_error},
            {"clean_errors", clean_errors},
            {"bayes_risk", bayes_risk ? nlohmann::json(*bayes_risk) : nlohmann::json()},
            {"complete", complete()},
            {"failures", failures},
            {"cells", cj}};
}

ExperimentReport run_contamination_experiment(const ExperimentConfig& config) {
    const auto splits = materialize_splits(config);
    const std::size_t n_splits = splits.size();

    ExperimentReport report;
    report.seed = config.seed;
    report.config = config.to_json();
    report.config.erase("workers");
    report.config_hash = config.hash();
    report.class_count = splits.front().first.class_count();

    // Clean baselines, one per split.
    std::vector<double> clean(n_splits);
    std::vector<std::uint64_t> test_hash(n_splits);
    parallel_for(n_splits, config.workers, [&](std::size_t s) {
        auto cfg = config.classifier;
        cfg.seed = derive_seed({config.classifier.seed, 0xC1EA, s});
        const auto model = clf::train_classifier(cfg, splits[s].first);
        clean[s] = test_error(model, splits[s].second);
        test_hash[s] = splits[s].second.content_hash();
    });
    report.clean_errors = clean;
    report.clean_error = mean(clean);

    if (const auto* g = std::get_if<GaussianMixtureSource>(&config.dataset)) {
        const auto oracle = mixture_oracle(*g);
        report.bayes_risk = synth::monte_carlo_risk_both(oracle, synth::bayes_decision(oracle), g->n_mc,
                                                         derive_seed({config.seed, 0xBA7E5}), config.workers)
                                .direct;
    }

    std::vector<std::vector<double>> weights(n_splits);
    for (std::size_t s = 0; s < n_splits; ++s) weights[s] = data::class_weights(splits[s].first);

    const std::size_t n_eps = config.epsilons.size();
    const std::size_t per_cell = config.instances * n_splits;
    const std::size_t jobs = config.kinds.size() * n_eps * per_cell;
    std::vector<double> loss(jobs, 0.0), error(jobs, 0.0);
    std::vector<std::string> failure(jobs);
    std::vector<std::uint8_t> ok(jobs, 0);

    parallel_for(jobs, config.workers, [&](std::size_t job) {
        const std::size_t cell = job / per_cell;
        const std::size_t within = job % per_cell;
        const std::size_t s = within / config.instances;
        const std::size_t instance = within % config.instances;
        const auto kind = config.kinds[cell / n_eps];
        const double eps = config.epsilons[cell % n_eps];
        const auto& [train, test] = splits[s];
        try {
            const std::uint64_t seed = run_seed(config.seed, kind, eps, instance, s);
            contamination::ContaminationSpec spec{kind, eps, config.target_class, seed};
            const auto dirty = contamination::contaminate(train, spec);
            auto cfg = config.classifier;
            cfg.seed = derive_seed({seed, 0x7A1});
            const auto model = clf::train_classifier(cfg, dirty.data);
            if (test.content_hash() != test_hash[s]) throw std::logic_error("clean test set was modified");
            error[job] = test_error(model, test);
            loss[job] = error[job] - clean[s];
            ok[job] = 1;
        } catch (const std::exception& e) {
            failure[job] = contamination::to_string(kind) + " eps=" + std::to_string(eps) + " instance=" +
                           std::to_string(instance) + " split=" + std::to_string(s) + ": " + e.what();
        }
    });

    for (std::size_t cell = 0; cell < config.kinds.size() * n_eps; ++cell) {
        CellResult r;
        r.kind = config.kinds[cell / n_eps];
        r.epsilon = config.epsilons[cell % n_eps];
        std::vector<double> l, e;
        for (std::size_t j = cell * per_cell; j < (cell + 1) * per_cell; ++j) {
            if (ok[j]) {
                l.push_back(loss[j]);
                e.push_back(error[j]);
            } else {
                report.failures.push_back(failure[j]);
            }
        }
        r.n_instances = l.size();
        r.n_failed = per_cell - l.size();
        r.incomplete = r.n_failed > 0;
        r.mean_loss = mean(l);
        r.mean_error = mean(e);
        if (l.size() > 1) {
            double ss = 0;
            for (double v : l) ss += (v - r.mean_loss) * (v - r.mean_loss);
            r.stderr_loss = std::sqrt(ss / static_cast<double>(l.size() - 1) / static_cast<double>(l.size()));
        }
        if (report.bayes_risk && !e.empty()) r.mean_excess = r.mean_error - *report.bayes_risk;
        r.bound_2class = bounds::two_class_bound(r.epsilon);
        if (report.class_count > 2) {
            double b = 0;
            for (const auto& w : weights) b += bounds::multi_class_bound(r.epsilon, w);
            r.bound_multiclass = b / static_cast<double>(n_splits);
        }
        report.cells.push_back(r);
    }
    return report;
}

std::vector<BoundComparisonRow> run_bound_comparison(const BoundComparisonConfig& config) {
    const auto oracle = mixture_oracle(config.mixture);
    const std::size_t n = config.mixture.n_train;
    std::vector<BoundComparisonRow> rows;
    for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
        const double eps = config.epsilons[i];
        const auto source = oracle.sample(n, derive_seed({config.seed, 0x50C, i}));
        const auto target = oracle.sample(n, derive_seed({config.seed, 0x7A6, i}));
        const auto dirty =
            contamination::contaminate(source, {contamination::Kind::cc, eps, std::nullopt, derive_seed({config.seed, 0xCC, i})})
                .data;

        const auto div = bounds::estimate_h_delta_h(dirty.features(), target.features(), config.probe,
                                                    derive_seed({config.seed, 0xD1F, i}));

        // λ proxy: best achievable error within each domain, measured on a held-out half.
        double lambda = 0;
        for (std::uint64_t d = 0; d < 2; ++d) {
            const auto& domain = d == 0 ? dirty : target;
            const auto halves = data::split(domain, data::Holdout{0.5}, derive_seed({config.seed, 0x1A, i, d}));
            auto cfg = config.classifier;
            cfg.seed = derive_seed({config.seed, 0x1B, i, d});
            const auto model = clf::train_classifier(cfg, halves.front().first);
            lambda += test_error(model, halves.front().second);
        }

        BoundComparisonRow row;
        row.probe_error = div.probe_error;
        row.bound.epsilon = eps;
        row.bound.two_class_bound = bounds::two_class_bound(eps);
        bounds::BenDavidInputs in{div.d_hat, static_cast<int>(config.mixture.p) + 1, static_cast<long long>(n),
                                  config.delta, lambda};
        row.bound.ben_david_inputs = in;
        row.bound.ben_david_bound = bounds::ben_david_bound(in);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace contam::harness
