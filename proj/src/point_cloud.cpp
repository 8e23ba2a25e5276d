#include "fsasc/point_cloud.hpp"

#include <string>

#include "fsasc/errors.hpp"

namespace fsasc {

PointCloud make_cloud(Matrix points, std::optional<std::vector<int>> labels) {
  require(points.rows() >= 1, "PointCloud: need at least one point");
  require(points.cols() >= 2, "PointCloud: ambient dimension must be >= 2");
  if (labels && static_cast<Eigen::Index>(labels->size()) != points.rows())
    throw ContractError("PointCloud: " + std::to_string(labels->size()) + " labels for " +
                        std::to_string(points.rows()) + " points");
  PointCloud cloud{std::move(points), std::move(labels), false};
  return cloud;
}

PointCloud unit_normalize(PointCloud cloud) {
  for (Eigen::Index j = 0; j < cloud.points.rows(); ++j) {
    const double norm = cloud.points.row(j).norm();
    if (norm <= 1e-12)
      throw ContractError("unit_normalize: point " + std::to_string(j) + " has zero norm");
    cloud.points.row(j) /= norm;
  }
  cloud.unit_normalized = true;
  return cloud;
}

Matrix select_rows(const MatrixRef& points, const std::vector<int>& order) {
  Matrix out(static_cast<Eigen::Index>(order.size()), points.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points.row(order[i]);
  return out;
}

}  // namespace fsasc
