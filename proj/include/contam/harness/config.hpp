#pragma once

#include "contam/classifiers/classifier.hpp"
#include "contam/contamination/contaminate.hpp"
#include "contam/data/dataset.hpp"
#include "contam/synthgen/pattern.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

namespace contam::harness {

/// Fresh train/test draws from the mixture each repetition.
struct GaussianMixtureSource {
    std::size_t p = 10;
    std::vector<double> mu;  // empty: 0.5 in every coordinate
    std::uint64_t seed_a = 11;
    std::size_t n_train = 1000;
    std::size_t n_test = 2000;
    std::size_t n_mc = 100000;  // draws for the R* estimate
};

struct PatternSource {
    synth::PatternKind kind = synth::PatternKind::nested_square;
    std::size_t n = 1000;
};

struct CsvSource {
    std::filesystem::path path;
    data::LabelColumn label_column = std::size_t{0};
    std::optional<std::filesystem::path> test_path;
    std::optional<int> class_count;
};

struct RasterSource {
    std::filesystem::path path;
};

using DatasetSource = std::variant<GaussianMixtureSource, PatternSource, CsvSource, RasterSource>;

/// The source already supplies its test set (mixture draws or a CSV test_path).
struct GivenSplit {};

using SplitConfig = std::variant<data::Holdout, data::KFold, GivenSplit>;

struct ExperimentConfig {
    DatasetSource dataset = GaussianMixtureSource{};
    SplitConfig split = GivenSplit{};
    bool scale = false;  // min-max to [0, 1] fitted on each clean training set
    std::vector<double> epsilons{0.01, 0.02, 0.03, 0.04, 0.05, 0.10};
    std::vector<contamination::Kind> kinds{contamination::Kind::c1, contamination::Kind::c2,
                                           contamination::Kind::cg, contamination::Kind::cc};
    std::optional<int> target_class;
    std::size_t instances = 100;
    std::size_t repetitions = 5;
    clf::ClassifierConfig classifier;
    std::uint64_t seed = 0;
    std::size_t workers = 1;

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    /// FNV-1a of the canonical JSON form; worker count excluded.
    std::string hash() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Paths inside the config resolve against `base` when relative.
ExperimentConfig load_experiment_config(const std::filesystem::path& path, const std::filesystem::path& base);

}  // namespace contam::harness
