#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fsasc/tensor_poly.hpp"

namespace fsasc {

/// Stacked Veronese matrix V_n(X): row j is nu_n(x_j).
struct EmbeddedData {
  Matrix matrix;
  std::shared_ptr<const MonomialBasis> basis;
};

EmbeddedData embed_data(const MatrixRef& points, int degree);

/// Right singular vectors of the embedded matrix, with singular values padded
/// by zeros up to M when the matrix has fewer rows than columns. Singular
/// values are sorted decreasingly; column k of `vectors` pairs with value k.
struct RightSingular {
  Vector values;
  Matrix vectors;
};

RightSingular right_singular(const MatrixRef& matrix);

/// Relative tolerance under which two smallest singular values are considered tied.
inline constexpr double kSingularTieTolerance = 1e-12;
/// Relative threshold defining the numerical nullspace in `null_candidates`.
inline constexpr double kNullspaceTolerance = 1e-8;

/// Unit-norm c minimizing ||V c||, sign-fixed so that its first entry with
/// magnitude above 1e-12 is positive.
///
/// When the smallest singular value is repeated and a reference point is
/// supplied, the returned c is the unit vector of the tied subspace whose
/// gradient at the reference has the largest norm. Without a reference the
/// singular vector of the smallest singular value is used.
HomoPoly fit_vanishing(const EmbeddedData& data, std::optional<VectorRef> reference = std::nullopt);

/// For m = 1..max_degree, an orthonormal basis of the numerical right
/// nullspace of V_m(points), concatenated in increasing degree.
std::vector<HomoPoly> null_candidates(const MatrixRef& points, int max_degree,
                                      double relative_tolerance = kNullspaceTolerance);

/// Mean over points of |<x_j, grad p(x_j) / ||grad p(x_j)||>|. Points with a
/// vanishing gradient contribute zero but still count in the mean.
double beta_statistic(const MatrixRef& points, const HomoPoly& p);

/// Applies the canonical sign: first entry with |c_k| > 1e-12 is positive.
void canonicalize_sign(Vector& coeffs);

}  // namespace fsasc
