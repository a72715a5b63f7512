#pragma once

#include "contam/core/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace contam::data {

/// Feature rows with dense integer class ids in [0, class_count).
class LabeledDataset {
public:
    LabeledDataset() = default;

    /// Validates shape, label range and finiteness; throws SchemaError/DomainError.
    LabeledDataset(Matrix features, std::vector<int> labels, int class_count,
                   std::vector<std::string> feature_names = {},
                   std::vector<std::string> label_names = {});

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
    int class_count() const { return class_count_; }

    const Matrix& features() const { return features_; }
    const std::vector<int>& labels() const { return labels_; }
    int label(std::size_t i) const { return labels_[i]; }
    std::span<const double> row(std::size_t i) const { return row_span(features_, i); }

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    /// Original label text for each dense id, when ingested from text.
    const std::vector<std::string>& label_names() const { return label_names_; }

    /// Rows at `indices`, in the given order.
    LabeledDataset subset(std::span<const std::size_t> indices) const;

    /// Same schema, replaced contents (used by contamination and scaling).
    LabeledDataset with(Matrix features, std::vector<int> labels) const;

    /// Per-class row counts, length class_count.
    std::vector<std::size_t> class_counts() const;

    /// Fingerprint of features and labels, for untouched-data assertions.
    std::uint64_t content_hash() const;

private:
    Matrix features_;
    std::vector<int> labels_;
    int class_count_ = 0;
    std::vector<std::string> feature_names_;
    std::vector<std::string> label_names_;
};

struct ScaleParams {
    std::vector<double> min;
    std::vector<double> max;

    /// (x - min) / (max - min); degenerate features map to 0.
    LabeledDataset apply(const LabeledDataset& ds) const;
};

// ---- CSV ingestion ----

using LabelColumn = std::variant<std::size_t, std::string>;

struct CsvOptions {
    LabelColumn label_column = std::size_t{0};
    /// Fixes J; integer labels are then used verbatim and must lie in [0, J).
    std::optional<int> class_count;
    /// Header detection: nullopt = auto (first row has a non-numeric feature cell).
    std::optional<bool> has_header;
};

/**
 * Reads a comma-separated numeric table.
 *
 * Labels that all parse as integers are remapped in ascending numeric order;
 * any other label text is enumerated by order of first appearance. With
 * `class_count` set, integer labels are kept as-is and must be < J.
 * Throws ParseError (row/column in the message) or SchemaError.
 */
LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features then a trailing `label` column, 17 significant digits.
void write_csv(const LabeledDataset& ds, const std::filesystem::path& path);

// ---- splitting ----

struct Holdout {
    double fraction;
};
struct KFold {
    std::size_t k;
};
using SplitMode = std::variant<Holdout, KFold>;

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded uniform permutation; indices inside each part are sorted ascending.
std::vector<SplitIndices> split_indices(std::size_t n, const SplitMode& mode, std::uint64_t seed);

std::vector<std::pair<LabeledDataset, LabeledDataset>> split(const LabeledDataset& ds,
                                                              const SplitMode& mode,
                                                              std::uint64_t seed);

/// CSV with columns fold,role,index.
void write_split_csv(const std::vector<SplitIndices>& splits, const std::filesystem::path& path);
std::vector<SplitIndices> read_split_csv(const std::filesystem::path& path);

// ---- scaling / class weights ----

ScaleParams fit_unit_interval(const LabeledDataset& train);

/// Fits on `train` only and maps train followed by every dataset in `others`.
std::pair<std::vector<LabeledDataset>, ScaleParams>
scale_unit_interval(const LabeledDataset& train, std::span<const LabeledDataset> others);

/// Empirical class frequencies sorted descending; sums to 1.
std::vector<double> class_weights(const LabeledDataset& ds);

}  // namespace contam::data
