#include "contam/classifiers/knn.hpp"

#include "contam/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace contam::clf {

std::size_t default_k(std::size_t n) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
}

int knn_classify(const data::LabeledDataset& train, std::span<const double> x, std::size_t k) {
    const std::size_t n = train.size();
    if (k < 1 || k > n) throw DomainError("k must satisfy 1 <= k <= n");
    if (x.size() != train.dim()) throw SchemaError("query dimension mismatch");
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = train.row(i);
        double d2 = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = r[j] - x[j];
            d2 += d * d;
        }
        dist[i] = {d2, i};
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    std::vector<std::size_t> votes(static_cast<std::size_t>(train.class_count()), 0);
    for (std::size_t m = 0; m < k; ++m) ++votes[static_cast<std::size_t>(train.label(dist[m].second))];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace contam::clf
