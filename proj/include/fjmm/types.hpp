#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fjmm {

// Row-major storage: every hot loop in the toolkit walks matrices by row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Sorted, duplicate-free list of 0-based node indices.
using NodeSet = std::vector<int>;

}  // namespace fjmm
