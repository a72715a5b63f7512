#include "contam/data/dataset.hpp"

#include "contam/core/error.hpp"
#include "contam/core/hash.hpp"
#include "contam/core/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace contam::data {

LabeledDataset::LabeledDataset(Matrix features, std::vector<int> labels, int class_count,
                               std::vector<std::string> feature_names,
                               std::vector<std::string> label_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      class_count_(class_count),
      feature_names_(std::move(feature_names)),
      label_names_(std::move(label_names)) {
    if (labels_.empty() || features_.rows() == 0) throw SchemaError("dataset needs n >= 1");
    if (features_.cols() == 0) throw SchemaError("dataset needs p >= 1");
    if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
        throw SchemaError("feature rows (" + std::to_string(features_.rows()) + ") != labels (" +
                          std::to_string(labels_.size()) + ")");
    }
    if (class_count_ < 2) throw SchemaError("class_count must be >= 2");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 0 || labels_[i] >= class_count_) {
            throw SchemaError("label " + std::to_string(labels_[i]) + " at row " + std::to_string(i) +
                              " outside [0, " + std::to_string(class_count_) + ")");
        }
    }
    if (!features_.allFinite()) throw DomainError("dataset features contain non-finite values");
    if (!feature_names_.empty() && feature_names_.size() != dim()) {
        throw SchemaError("feature_names length does not match feature count");
    }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    Matrix f(static_cast<Eigen::Index>(indices.size()), features_.cols());
    std::vector<int> l(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        f.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(indices[r]));
        l[r] = labels_[indices[r]];
    }
    return with(std::move(f), std::move(l));
}

LabeledDataset LabeledDataset::with(Matrix features, std::vector<int> labels) const {
    return LabeledDataset(std::move(features), std::move(labels), class_count_, feature_names_,
                          label_names_);
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(class_count_), 0);
    for (int y : labels_) ++counts[static_cast<std::size_t>(y)];
    return counts;
}

std::uint64_t LabeledDataset::content_hash() const {
    Fnv64 h;
    h.doubles({features_.data(), static_cast<std::size_t>(features_.size())});
    h.ints(labels_);
    return h.value();
}

LabeledDataset ScaleParams::apply(const LabeledDataset& ds) const {
    if (ds.dim() != min.size()) throw SchemaError("scale params dimension mismatch");
    Matrix f = ds.features();
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        const double lo = min[static_cast<std::size_t>(j)];
        const double range = max[static_cast<std::size_t>(j)] - lo;
        if (range > 0) {
            f.col(j) = (f.col(j).array() - lo) / range;
        } else {
            f.col(j).setZero();
        }
    }
    return ds.with(std::move(f), ds.labels());
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_double(const std::string& cell) {
    double v = 0;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
    return v;
}

std::optional<long long> parse_int(const std::string& cell) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
    return v;
}

}  // namespace

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        if (trim(line).empty()) continue;
        rows.push_back(split_line(line));
        line_numbers.push_back(line_no);
    }
    if (rows.empty()) throw ParseError(path.string() + ": no rows");

    const std::size_t width = rows.front().size();
    if (width < 2) throw ParseError(path.string() + ": need at least one feature and a label column");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != width) {
            throw ParseError(path.string() + ": row " + std::to_string(line_numbers[r]) + " has " +
                             std::to_string(rows[r].size()) + " cells, expected " + std::to_string(width));
        }
    }

    const bool named_label = std::holds_alternative<std::string>(options.label_column);
    bool header = false;
    if (options.has_header) {
        header = *options.has_header;
    } else if (named_label) {
        header = true;
    } else {
        const auto lc = std::get<std::size_t>(options.label_column);
        for (std::size_t c = 0; c < width; ++c) {
            if (c != lc && !parse_double(rows.front()[c])) header = true;
        }
    }

    std::vector<std::string> header_cells;
    if (header) {
        header_cells = rows.front();
        rows.erase(rows.begin());
        line_numbers.erase(line_numbers.begin());
        if (rows.empty()) throw ParseError(path.string() + ": no rows");
    }

    std::size_t label_col = 0;
    if (named_label) {
        const auto& name = std::get<std::string>(options.label_column);
        auto it = std::find(header_cells.begin(), header_cells.end(), name);
        if (it == header_cells.end()) throw SchemaError("label column '" + name + "' not in header");
        label_col = static_cast<std::size_t>(it - header_cells.begin());
    } else {
        label_col = std::get<std::size_t>(options.label_column);
        if (label_col >= width) throw SchemaError("label column index out of range");
    }

    const auto n = rows.size();
    const auto p = width - 1;
    Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    std::vector<std::string> raw_labels(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t j = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_col) {
                raw_labels[r] = rows[r][c];
                continue;
            }
            const auto v = parse_double(rows[r][c]);
            const std::string where = path.string() + ": row " + std::to_string(line_numbers[r]) +
                                      ", column " + std::to_string(c + 1);
            if (!v) throw ParseError(where + ": non-numeric cell '" + rows[r][c] + "'");
            if (!std::isfinite(*v)) throw ParseError(where + ": non-finite cell '" + rows[r][c] + "'");
            features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j++)) = *v;
        }
    }

    std::vector<int> labels(n);
    std::vector<std::string> label_names;
    const bool all_int = std::all_of(raw_labels.begin(), raw_labels.end(),
                                     [](const std::string& s) { return parse_int(s).has_value(); });
    int class_count = 0;
    if (all_int && options.class_count) {
        class_count = *options.class_count;
        for (std::size_t r = 0; r < n; ++r) {
            const long long v = *parse_int(raw_labels[r]);
            if (v < 0 || v >= class_count) {
                throw SchemaError(path.string() + ": row " + std::to_string(line_numbers[r]) +
                                  ": label " + raw_labels[r] + " not in [0, " +
                                  std::to_string(class_count) + ")");
            }
            labels[r] = static_cast<int>(v);
        }
        for (int k = 0; k < class_count; ++k) label_names.push_back(std::to_string(k));
    } else {
        std::map<std::string, int> ids;
        if (all_int) {
            std::map<long long, std::string> sorted;
            for (const auto& s : raw_labels) sorted.emplace(*parse_int(s), s);
            for (const auto& [v, s] : sorted) {
                ids.emplace(s, static_cast<int>(label_names.size()));
                label_names.push_back(std::to_string(v));
            }
            // "01" and "1" parse to the same value; alias them.
            for (const auto& s : raw_labels) {
                if (!ids.count(s)) ids.emplace(s, ids.at(sorted.at(*parse_int(s))));
            }
        } else {
            for (const auto& s : raw_labels) {
                if (ids.emplace(s, static_cast<int>(label_names.size())).second) label_names.push_back(s);
            }
        }
        const int seen = static_cast<int>(label_names.size());
        if (options.class_count) {
            if (seen > *options.class_count) {
                throw SchemaError(path.string() + ": " + std::to_string(seen) + " distinct labels exceed class_count " +
                                  std::to_string(*options.class_count));
            }
            class_count = *options.class_count;
        } else {
            class_count = std::max(seen, 2);
        }
        for (std::size_t r = 0; r < n; ++r) labels[r] = ids.at(raw_labels[r]);
    }

    std::vector<std::string> feature_names;
    if (header) {
        for (std::size_t c = 0; c < width; ++c) {
            if (c != label_col) feature_names.push_back(header_cells[c]);
        }
    }
    return LabeledDataset(std::move(features), std::move(labels), class_count, std::move(feature_names),
                          std::move(label_names));
}

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t j = 0; j < ds.dim(); ++j) {
        out << (ds.feature_names().empty() ? "x" + std::to_string(j) : ds.feature_names()[j]) << ',';
    }
    out << "label\n";
    char buf[32];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << ds.label(i) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed, 0x5B1175);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.below(i)]);
    }
    return perm;
}

}  // namespace

std::vector<SplitIndices> split_indices(std::size_t n, const SplitMode& mode, std::uint64_t seed) {
    const auto perm = permutation(n, seed);
    std::vector<SplitIndices> out;
    if (const auto* h = std::get_if<Holdout>(&mode)) {
        if (!(h->fraction > 0.0 && h->fraction < 1.0)) throw DomainError("holdout fraction must be in (0,1)");
        const auto n_train = static_cast<std::size_t>(std::lround(h->fraction * static_cast<double>(n)));
        SplitIndices s;
        s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
        s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
        std::sort(s.train.begin(), s.train.end());
        std::sort(s.test.begin(), s.test.end());
        out.push_back(std::move(s));
        return out;
    }
    const std::size_t k = std::get<KFold>(mode).k;
    if (k < 2) throw DomainError("kfold needs k >= 2");
    if (k > n) throw DomainError("kfold k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    std::size_t start = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        SplitIndices s;
        for (std::size_t i = 0; i < n; ++i) {
            (i >= start && i < start + size ? s.test : s.train).push_back(perm[i]);
        }
        std::sort(s.train.begin(), s.train.end());
        std::sort(s.test.begin(), s.test.end());
        out.push_back(std::move(s));
        start += size;
    }
    return out;
}

std::vector<std::pair<LabeledDataset, LabeledDataset>> split(const LabeledDataset& ds, const SplitMode& mode,
                                                              std::uint64_t seed) {
    std::vector<std::pair<LabeledDataset, LabeledDataset>> out;
    for (const auto& s : split_indices(ds.size(), mode, seed)) {
        if (s.train.empty() || s.test.empty()) throw DomainError("split produced an empty part");
        out.emplace_back(ds.subset(s.train), ds.subset(s.test));
    }
    return out;
}

void write_split_csv(const std::vector<SplitIndices>& splits, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "fold,role,index\n";
    for (std::size_t f = 0; f < splits.size(); ++f) {
        for (auto i : splits[f].train) out << f << ",train," << i << '\n';
        for (auto i : splits[f].test) out << f << ",test," << i << '\n';
    }
}

std::vector<SplitIndices> read_split_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<SplitIndices> out;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        const auto fold = cells.size() == 3 ? parse_int(cells[0]) : std::nullopt;
        const auto index = cells.size() == 3 ? parse_int(cells[2]) : std::nullopt;
        if (!fold || !index || *fold < 0 || *index < 0 || (cells[1] != "train" && cells[1] != "test")) {
            throw ParseError(path.string() + ": bad split row " + std::to_string(line_no));
        }
        if (out.size() <= static_cast<std::size_t>(*fold)) out.resize(static_cast<std::size_t>(*fold) + 1);
        auto& s = out[static_cast<std::size_t>(*fold)];
        (cells[1] == "train" ? s.train : s.test).push_back(static_cast<std::size_t>(*index));
    }
    return out;
}

ScaleParams fit_unit_interval(const LabeledDataset& train) {
    ScaleParams params;
    const auto& f = train.features();
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        params.min.push_back(f.col(j).minCoeff());
        params.max.push_back(f.col(j).maxCoeff());
    }
    return params;
}

std::pair<std::vector<LabeledDataset>, ScaleParams>
scale_unit_interval(const LabeledDataset& train, std::span<const LabeledDataset> others) {
    auto params = fit_unit_interval(train);
    std::vector<LabeledDataset> scaled;
    scaled.push_back(params.apply(train));
    for (const auto& ds : others) scaled.push_back(params.apply(ds));
    return {std::move(scaled), std::move(params)};
}

std::vector<double> class_weights(const LabeledDataset& ds) {
    std::vector<double> w;
    for (auto c : ds.class_counts()) w.push_back(static_cast<double>(c) / static_cast<double>(ds.size()));
    std::sort(w.begin(), w.end(), std::greater<>());
    return w;
}

}  // namespace contam::data
