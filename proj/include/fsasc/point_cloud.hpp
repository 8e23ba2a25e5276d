#pragma once

#include <optional>
#include <vector>

#include "fsasc/tensor_poly.hpp"

namespace fsasc {

/// N points in R^D stored as the rows of an N x D matrix, with optional
/// ground-truth labels (one per point, 0-based).
struct PointCloud {
  Matrix points;
  std::optional<std::vector<int>> labels;
  bool unit_normalized = false;

  Eigen::Index size() const noexcept { return points.rows(); }
  int dim() const noexcept { return static_cast<int>(points.cols()); }
};

/// Validates shape (N >= 1, D >= 2, labels sized N) and returns the cloud.
PointCloud make_cloud(Matrix points, std::optional<std::vector<int>> labels = std::nullopt);

/// Divides every row by its Euclidean norm. Rows of norm <= 1e-12 are a contract error.
PointCloud unit_normalize(PointCloud cloud);

/// Copy of `points` with rows permuted so that row i of the result is row order[i].
Matrix select_rows(const MatrixRef& points, const std::vector<int>& order);

}  // namespace fsasc
