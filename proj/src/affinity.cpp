#include "fsasc/affinity.hpp"

#include <algorithm>

#include "fsasc/errors.hpp"

namespace fsasc {
namespace {

constexpr double kGradientFloor = 1e-12;

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::string_view to_string(AffinityKind kind) {
  switch (kind) {
    case AffinityKind::angle: return "angle";
    case AffinityKind::distance: return "distance";
    case AffinityKind::filtrated: return "filtrated";
  }
  return "unknown";
}

Matrix unit_gradients(const MatrixRef& points, const HomoPoly& p) {
  require(!p.is_zero(), "affinity: polynomial is identically zero");
  Matrix grads = p.gradients(points);
  for (Eigen::Index j = 0; j < grads.rows(); ++j) {
    const double norm = grads.row(j).norm();
    if (norm <= kGradientFloor)
      grads.row(j).setZero();
    else
      grads.row(j) /= norm;
  }
  return grads;
}

AffinityMatrix angle_affinity(const MatrixRef& points, const HomoPoly& p) {
  const Matrix g = unit_gradients(points, p);
  AffinityMatrix out{(g * g.transpose()).cwiseAbs(), AffinityKind::angle};
  out.values = out.values.unaryExpr(&clamp_unit);
  out.values.diagonal().setOnes();
  return out;
}

AffinityMatrix distance_affinity(const MatrixRef& points, const HomoPoly& p) {
  const Matrix g = unit_gradients(points, p);
  // dist(j, j') = |<g_j, x_j'>|: distance of x_j' from the hyperplane of x_j.
  const Matrix dist = (g * points.transpose()).cwiseAbs();
  Matrix values = Matrix::Ones(points.rows(), points.rows()) - 0.5 * dist - 0.5 * dist.transpose();
  AffinityMatrix out{values.unaryExpr(&clamp_unit), AffinityKind::distance};
  out.values.diagonal().setOnes();
  return out;
}

}  // namespace fsasc
