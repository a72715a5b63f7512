#pragma once

#include "contam/bounds/bounds.hpp"
#include "contam/classifiers/classifier.hpp"
#include "contam/raster/resample.hpp"
#include "contam/raster/scene.hpp"

#include "json.hpp"

#include <optional>
#include <vector>

namespace contam::harness {

struct SceneConfig {
    std::size_t width = 596;
    std::size_t height = 529;
    int class_count = 5;
    std::size_t bands = 10;
    double noise_sigma = 0.1;
    double patchiness = 1.0;
    std::uint64_t seed = 0;

    raster::RasterScene generate() const;
    nlohmann::json to_json() const;
};

struct MisregExperimentConfig {
    SceneConfig scene;
    raster::MisregParams pipeline;
    clf::ClassifierConfig classifier;
    std::size_t sample_size = 2000;  // distorted pixels drawn for the folds
    std::size_t folds = 5;
    std::size_t boundary_samples = 150;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
};

struct MisregFold {
    double clean_accuracy = 0;   // trained on original pixels
    double misreg_accuracy = 0;  // trained on the mis-registered pixels at the same locations
};

/// Bounds at one estimate of ε (two-class always, multi-class for J > 2).
struct EpsilonBound {
    double epsilon = 0;
    double two_class = 0;
    std::optional<double> multi_class;

    double applicable() const { return multi_class ? *multi_class : two_class; }
};

struct MisregReport {
    std::vector<MisregFold> folds;
    double mean_clean_accuracy = 0;
    double mean_misreg_accuracy = 0;
    double accuracy_drop = 0;  // mean clean minus mean misreg
    EpsilonBound truth;        // ε from the pixel alignment
    EpsilonBound patch;        // boundary fraction over every pixel
    EpsilonBound sampling;     // boundary fraction over a random sample
    std::size_t original_width = 0, original_height = 0;
    std::size_t distorted_width = 0, distorted_height = 0;
    std::vector<double> class_weights;
    nlohmann::json config;

    nlohmann::json to_json() const;
};

/**
 * Generate a scene and its mis-registered copy, pair each sampled
 * distorted pixel with the original pixel its label came from, and
 * compare k-fold accuracy of training on original versus distorted
 * features. Every fold tests on original pixels only.
 */
MisregReport run_misreg_experiment(const MisregExperimentConfig& config);

/// Same, on a caller-supplied original scene.
MisregReport run_misreg_experiment(const raster::RasterScene& original, const MisregExperimentConfig& config);

}  // namespace contam::harness
