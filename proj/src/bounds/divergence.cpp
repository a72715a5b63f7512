#include "contam/bounds/divergence.hpp"

#include "contam/classifiers/evaluate.hpp"
#include "contam/core/error.hpp"
#include "contam/core/rng.hpp"

#include <algorithm>
#include <numeric>

namespace contam::bounds {

namespace {

// Seeded halving of [0, n): first part gets ⌈n/2⌉ rows.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> halve(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const std::size_t half = (n + 1) / 2;
    std::vector<std::size_t> a(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<std::size_t> b(perm.begin() + static_cast<std::ptrdiff_t>(half), perm.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return {a, b};
}

}  // namespace

DivergenceEstimate estimate_h_delta_h(const Matrix& source, const Matrix& target,
                                      const clf::ClassifierConfig& probe, std::uint64_t seed) {
    if (source.rows() == 0 || target.rows() == 0) throw DomainError("both samples must be non-empty");
    if (source.cols() != target.cols()) throw SchemaError("source and target dimensions differ");
    if (source.rows() < 2 || target.rows() < 2) throw DomainError("each sample needs at least two rows");
    Rng rng(seed, 0xD1);
    const auto [src_train, src_test] = halve(static_cast<std::size_t>(source.rows()), rng);
    const auto [tgt_train, tgt_test] = halve(static_cast<std::size_t>(target.rows()), rng);

    auto stack = [&](const std::vector<std::size_t>& s, const std::vector<std::size_t>& t) {
        Matrix f(static_cast<Eigen::Index>(s.size() + t.size()), source.cols());
        std::vector<int> y;
        Eigen::Index r = 0;
        for (auto i : s) { f.row(r++) = source.row(static_cast<Eigen::Index>(i)); y.push_back(0); }
        for (auto i : t) { f.row(r++) = target.row(static_cast<Eigen::Index>(i)); y.push_back(1); }
        return data::LabeledDataset(std::move(f), std::move(y), 2);
    };
    const auto train = stack(src_train, tgt_train);
    const auto test = stack(src_test, tgt_test);
    const auto model = clf::train_classifier(probe, train);
    const double err = clf::evaluate(model.predict(test.features()), test).error_rate;
    return {2 * (1 - 2 * std::min(err, 1 - err)), err};
}

}  // namespace contam::bounds
