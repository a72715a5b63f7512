#pragma once

#include "contam/data/dataset.hpp"

#include <span>

namespace contam::clf {

/// ⌊√n⌋, at least 1.
std::size_t default_k(std::size_t n);

/// Majority label of the k nearest training rows (Euclidean). Distance ties
/// prefer the lower row index; vote ties prefer the lower class id.
int knn_classify(const data::LabeledDataset& train, std::span<const double> x, std::size_t k);

}  // namespace contam::clf
