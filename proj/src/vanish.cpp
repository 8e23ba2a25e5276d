#include "fsasc/vanish.hpp"

#include <string>

#include <Eigen/SVD>

#include "fsasc/errors.hpp"

namespace fsasc {
namespace {

constexpr double kGradientFloor = 1e-12;
constexpr std::size_t kMaxSvdColumns = 512;

HomoPoly make_poly(const std::shared_ptr<const MonomialBasis>& basis, Vector c) {
  canonicalize_sign(c);
  return HomoPoly(basis, std::move(c));
}

}  // namespace

EmbeddedData embed_data(const MatrixRef& points, int degree) {
  require(degree >= 1, "embed_data: degree must be >= 1");
  require(points.cols() >= 1, "embed_data: points must have positive dimension");
  require(points.rows() >= 1, "embed_data: need at least one point");
  auto basis = MonomialBasis::get(static_cast<int>(points.cols()), degree);
  return {basis->embed_rows(points), basis};
}

RightSingular right_singular(const MatrixRef& matrix) {
  const Eigen::Index m = matrix.cols();
  if (static_cast<std::size_t>(m) > kMaxSvdColumns)
    throw CapacityError("right_singular: " + std::to_string(m) + " columns exceeds the dense SVD limit of " +
                        std::to_string(kMaxSvdColumns));
  RightSingular out;
  out.values = Vector::Zero(m);
  if (matrix.rows() >= m) {
    Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(matrix, Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalError("right_singular: SVD did not converge");
    out.values = svd.singularValues();
    out.vectors = svd.matrixV();
  } else {
    Eigen::JacobiSVD<Matrix> svd(matrix, Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalError("right_singular: SVD did not converge");
    out.values.head(svd.singularValues().size()) = svd.singularValues();
    out.vectors = svd.matrixV();
  }
  if (!out.values.allFinite() || !out.vectors.allFinite())
    throw NumericalError("right_singular: non-finite result (input contains NaN or Inf?)");
  return out;
}

void canonicalize_sign(Vector& coeffs) {
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    if (std::abs(coeffs[k]) > 1e-12) {
      if (coeffs[k] < 0) coeffs = -coeffs;
      return;
    }
  }
}

HomoPoly fit_vanishing(const EmbeddedData& data, std::optional<VectorRef> reference) {
  require(data.basis != nullptr, "fit_vanishing: missing basis");
  require(data.matrix.rows() >= 1, "fit_vanishing: need at least one point");
  require(data.basis->size() >= 2, "fit_vanishing: need at least two monomials");
  const auto svd = right_singular(data.matrix);
  const Eigen::Index m = svd.values.size();
  const double smallest = svd.values[m - 1];
  const double cutoff = smallest + kSingularTieTolerance * svd.values[0];

  Eigen::Index first_tied = m - 1;
  while (first_tied > 0 && svd.values[first_tied - 1] <= cutoff) --first_tied;
  const Eigen::Index tied = m - first_tied;

  if (tied == 1 || !reference) return make_poly(data.basis, svd.vectors.col(m - 1));

  const Matrix span = svd.vectors.rightCols(tied);
  const Matrix grad_map = gradient_operator(*data.basis, *reference) * span;
  Eigen::JacobiSVD<Matrix> inner(grad_map, Eigen::ComputeFullV);
  if (inner.singularValues().size() == 0 || inner.singularValues()[0] <= kGradientFloor)
    return make_poly(data.basis, svd.vectors.col(m - 1));
  Vector c = span * inner.matrixV().col(0);
  c.normalize();
  return make_poly(data.basis, std::move(c));
}

std::vector<HomoPoly> null_candidates(const MatrixRef& points, int max_degree, double relative_tolerance) {
  require(max_degree >= 1, "null_candidates: max_degree must be >= 1");
  std::vector<HomoPoly> out;
  for (int degree = 1; degree <= max_degree; ++degree) {
    const auto data = embed_data(points, degree);
    if (data.basis->size() < 2) continue;
    const auto svd = right_singular(data.matrix);
    const double threshold = relative_tolerance * svd.values[0];
    for (Eigen::Index k = 0; k < svd.values.size(); ++k)
      if (svd.values[k] <= threshold) out.push_back(make_poly(data.basis, svd.vectors.col(k)));
  }
  return out;
}

double beta_statistic(const MatrixRef& points, const HomoPoly& p) {
  require(!p.is_zero(), "beta_statistic: polynomial is identically zero");
  require(points.rows() >= 1, "beta_statistic: need at least one point");
  const Matrix grads = p.gradients(points);
  double total = 0.0;
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    const double norm = grads.row(j).norm();
    if (norm <= kGradientFloor) continue;
    total += std::abs(points.row(j).dot(grads.row(j))) / norm;
  }
  return total / static_cast<double>(points.rows());
}

}  // namespace fsasc
