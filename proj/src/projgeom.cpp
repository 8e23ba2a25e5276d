#include "fsasc/projgeom.hpp"

#include <string>

#include "fsasc/errors.hpp"

namespace fsasc {

HyperplaneProjection::HyperplaneProjection(const VectorRef& normal) {
  const Eigen::Index d = normal.size();
  require(d >= 1, "make_projection: empty normal");
  const double norm = normal.norm();
  if (!(norm > 1e-12)) throw ContractError("make_projection: normal has near-zero norm");
  normal_ = normal / norm;

  Eigen::Index pivot = 0;
  normal_.cwiseAbs().maxCoeff(&pivot);
  // H = I - 2 v v^T / v^T v maps normal to a multiple of e_pivot, so the other
  // rows of the symmetric orthogonal H span normal^perp.
  Vector v = normal_;
  v[pivot] += normal_[pivot] >= 0 ? 1.0 : -1.0;
  const double scale = 2.0 / v.squaredNorm();
  basis_.resize(d - 1, d);
  for (Eigen::Index r = 0, out = 0; r < d; ++r) {
    if (r == pivot) continue;
    basis_.row(out) = -scale * v[r] * v.transpose();
    basis_(out, r) += 1.0;
    ++out;
  }
}

Vector HyperplaneProjection::apply(const VectorRef& y) const {
  if (y.size() != normal_.size())
    throw ContractError("apply: vector has dimension " + std::to_string(y.size()) + ", projection expects " +
                        std::to_string(normal_.size()));
  return basis_ * y;
}

HyperplaneProjection HyperplaneProjection::rotated(const MatrixRef& rotation) const {
  require(rotation.rows() == basis_.rows() && rotation.cols() == basis_.rows(),
          "rotated: rotation must be (d-1) x (d-1)");
  HyperplaneProjection out = *this;
  out.basis_ = rotation * basis_;
  return out;
}

Matrix HyperplaneProjection::apply_rows(const MatrixRef& points) const {
  if (points.cols() != normal_.size()) throw ContractError("apply_rows: dimension mismatch");
  return points * basis_.transpose();
}

HyperplaneProjection make_projection(const VectorRef& normal) { return HyperplaneProjection(normal); }

Vector apply(const HyperplaneProjection& projection, const VectorRef& y) { return projection.apply(y); }

void ProjectionChain::push(HyperplaneProjection step) {
  if (!steps_.empty() && step.input_dim() != steps_.back().input_dim() - 1)
    throw ContractError("ProjectionChain: step input dimension must decrease by one");
  steps_.push_back(std::move(step));
}

Vector ProjectionChain::apply(const VectorRef& y, std::size_t depth) const {
  require(depth <= steps_.size(), "ProjectionChain::apply: depth exceeds chain length");
  Vector out = y;
  for (std::size_t k = 0; k < depth; ++k) out = steps_[k].apply(out);
  return out;
}

Vector apply_chain(const ProjectionChain& chain, const VectorRef& y) { return chain.apply(y); }

}  // namespace fsasc
