#include "contam/harness/misreg_experiment.hpp"

#include "contam/classifiers/evaluate.hpp"
#include "contam/core/error.hpp"
#include "contam/core/parallel.hpp"
#include "contam/core/rng.hpp"
#include "contam/data/dataset.hpp"
#include "contam/raster/boundary.hpp"

#include <numeric>

namespace contam::harness {
namespace {

EpsilonBound bound_at(double eps, int class_count, const std::vector<double>& weights) {
    EpsilonBound b;
    b.epsilon = eps;
    if (eps >= 0.5) {
        b.two_class = std::numeric_limits<double>::infinity();
        if (class_count > 2) b.multi_class = b.two_class;
        return b;
    }
    b.two_class = bounds::two_class_bound(eps);
    if (class_count > 2) b.multi_class = bounds::multi_class_bound(eps, weights);
    return b;
}

nlohmann::json bound_json(const EpsilonBound& b) {
    nlohmann::json j = {{"epsilon", b.epsilon}, {"two_class", b.two_class}};
    j["multi_class"] = b.multi_class ? nlohmann::json(*b.multi_class) : nlohmann::json();
    return j;
}

}  // namespace

raster::RasterScene SceneConfig::generate() const {
    return raster::gen_cropland(width, height, class_count,
                                raster::VegetationProfileSet::defaults(class_count, bands, noise_sigma), patchiness,
                                seed);
}

nlohmann::json SceneConfig::to_json() const {
    return {{"width", width},           {"height", height},         {"class_count", class_count},
            {"bands", bands},           {"noise_sigma", noise_sigma}, {"patchiness", patchiness},
            {"seed", seed}};
}

nlohmann::json MisregReport::to_json() const {
    nlohmann::json fj = nlohmann::json::array();
    for (const auto& f : folds) fj.push_back({{"clean_accuracy", f.clean_accuracy}, {"misreg_accuracy", f.misreg_accuracy}});
    return {{"config", config},
            {"original_size", {original_width, original_height}},
            {"distorted_size", {distorted_width, distorted_height}},
            {"class_weights", class_weights},
            {"folds", fj},
            {"mean_clean_accuracy", mean_clean_accuracy},
            {"mean_misreg_accuracy", mean_misreg_accuracy},
            {"accuracy_drop", accuracy_drop},
            {"epsilon_truth", bound_json(truth)},
            {"epsilon_patch", bound_json(patch)},
            {"epsilon_sampling", bound_json(sampling)}};
}

MisregReport run_misreg_experiment(const MisregExperimentConfig& config) {
    return run_misreg_experiment(config.scene.generate(), config);
}

MisregReport run_misreg_experiment(const raster::RasterScene& original, const MisregExperimentConfig& config) {
    if (config.folds < 2) throw DomainError("misreg experiment needs >= 2 folds");
    auto params = config.pipeline;
    const auto distorted = raster::misregister(original, params);
    const auto& scene = distorted.scene;

    std::vector<std::size_t> pixels;
    for (std::size_t i = 0; i < scene.pixel_count(); ++i) {
        if (scene.valid[i] && original.valid[distorted.label_source[i]]) pixels.push_back(i);
    }
    const std::size_t m = std::min(config.sample_size, pixels.size());
    if (m < config.folds) throw DomainError("too few aligned pixels for the requested folds");
    Rng rng(config.seed, 0x3E6);
    for (std::size_t i = 0; i < m; ++i) std::swap(pixels[i], pixels[i + rng.below(pixels.size() - i)]);
    pixels.resize(m);
    std::vector<std::size_t> homes(m);
    for (std::size_t i = 0; i < m; ++i) homes[i] = distorted.label_source[pixels[i]];

    const auto clean_ds = raster::scene_pixels_to_dataset(original, homes);
    const auto misreg_ds = raster::scene_pixels_to_dataset(scene, pixels);

    MisregReport report;
    report.config = {{"scene", config.scene.to_json()},
                     {"pipeline",
                      {{"rotation_deg", params.rotation_deg},
                       {"offset_sigma", params.offset_sigma},
                       {"shared_offset", params.shared_offset},
                       {"seed", params.seed}}},
                     {"classifier", config.classifier.to_json()},
                     {"sample_size", config.sample_size},
                     {"folds", config.folds},
                     {"boundary_samples", config.boundary_samples},
                     {"seed", config.seed}};
    report.original_width = original.width;
    report.original_height = original.height;
    report.distorted_width = scene.width;
    report.distorted_height = scene.height;
    report.class_weights = data::class_weights(clean_ds);

    const auto splits = data::split_indices(m, data::KFold{config.folds}, derive_seed({config.seed, 0xF0D}));
    report.folds.resize(splits.size());
    parallel_for(splits.size() * 2, config.workers, [&](std::size_t job) {
        const auto& sp = splits[job / 2];
        const bool misreg = job % 2 == 1;
        const auto train = (misreg ? misreg_ds : clean_ds).subset(sp.train);
        const auto test = clean_ds.subset(sp.test);
        auto cfg = config.classifier;
        cfg.seed = derive_seed({config.classifier.seed, job / 2});
        const auto model = clf::train_classifier(cfg, train);
        const double acc = clf::evaluate(model.predict(test.features()), test).accuracy();
        (misreg ? report.folds[job / 2].misreg_accuracy : report.folds[job / 2].clean_accuracy) = acc;
    });
    for (const auto& f : report.folds) {
        report.mean_clean_accuracy += f.clean_accuracy;
        report.mean_misreg_accuracy += f.misreg_accuracy;
    }
    report.mean_clean_accuracy /= static_cast<double>(report.folds.size());
    report.mean_misreg_accuracy /= static_cast<double>(report.folds.size());
    report.accuracy_drop = report.mean_clean_accuracy - report.mean_misreg_accuracy;

    const int J = original.class_count;
    report.truth = bound_at(raster::misreg_epsilon(original, scene, distorted.alignment), J, report.class_weights);
    report.patch = bound_at(raster::boundary_fraction(scene.labels, scene.width, scene.height, raster::PatchMode{},
                                                      scene.valid),
                            J, report.class_weights);
    report.sampling = bound_at(
        raster::boundary_fraction(scene.labels, scene.width, scene.height,
                                  raster::SamplingMode{config.boundary_samples, derive_seed({config.seed, 0x5A})},
                                  scene.valid),
        J, report.class_weights);
    return report;
}

}  // namespace contam::harness
