#pragma once

#include <vector>

#include "fsasc/tensor_poly.hpp"

namespace fsasc {

/// Orthogonal projection of R^d onto the hyperplane b^perp, expressed in an
/// orthonormal basis of b^perp, i.e. a linear map R^d -> R^{d-1}.
class HyperplaneProjection {
public:
  /// Normalizes `normal` and builds the complement basis from a Householder
  /// reflector pivoted on the largest-magnitude entry of the normal.
  explicit HyperplaneProjection(const VectorRef& normal);

  int input_dim() const noexcept { return static_cast<int>(normal_.size()); }
  const Vector& normal() const noexcept { return normal_; }
  /// (d-1) x d, orthonormal rows spanning normal^perp.
  const Matrix& basis() const noexcept { return basis_; }

  Vector apply(const VectorRef& y) const;

  /// Same hyperplane, complement basis replaced by `rotation * basis()` for an
  /// orthogonal (d-1) x (d-1) `rotation`.
  HyperplaneProjection rotated(const MatrixRef& rotation) const;

  /// Applies the projection to every row of `points`.
  Matrix apply_rows(const MatrixRef& points) const;

private:
  Vector normal_;
  Matrix basis_;
};

HyperplaneProjection make_projection(const VectorRef& normal);
Vector apply(const HyperplaneProjection& projection, const VectorRef& y);

/// Composition of hyperplane projections with input dimensions D, D-1, ...
class ProjectionChain {
public:
  ProjectionChain() = default;

  /// Appends a step; its input dimension must equal the current output dimension.
  void push(HyperplaneProjection step);

  const std::vector<HyperplaneProjection>& steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }
  bool empty() const noexcept { return steps_.empty(); }

  /// Applies the first `depth` steps (all of them by default).
  Vector apply(const VectorRef& y, std::size_t depth) const;
  Vector apply(const VectorRef& y) const { return apply(y, steps_.size()); }

private:
  std::vector<HyperplaneProjection> steps_;
};

Vector apply_chain(const ProjectionChain& chain, const VectorRef& y);

}  // namespace fsasc
