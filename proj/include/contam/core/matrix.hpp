#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>

namespace contam {

/// Dense row-major matrix; one observation per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline std::span<const double> row_span(const Matrix& m, std::size_t i) {
    return {m.data() + i * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

inline std::span<double> row_span(Matrix& m, std::size_t i) {
    return {m.data() + i * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

}  // namespace contam
