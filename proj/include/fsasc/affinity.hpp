#pragma once

#include <string_view>

#include "fsasc/tensor_poly.hpp"

namespace fsasc {

enum class AffinityKind { angle, distance, filtrated };

std::string_view to_string(AffinityKind kind);

struct AffinityMatrix {
  Matrix values;
  AffinityKind kind = AffinityKind::angle;

  Eigen::Index size() const noexcept { return values.rows(); }
};

/// C_jj' = |<g_j, g_j'>| with g_j the unit-normalized gradient of p at x_j.
/// A point whose gradient norm is <= 1e-12 gets a zero row and column apart
/// from its unit diagonal.
AffinityMatrix angle_affinity(const MatrixRef& points, const HomoPoly& p);

/// D_jj' = 1 - |<g_j, x_j'>| / 2 - |<g_j', x_j>| / 2 with unit-normalized
/// gradients; a vanishing gradient contributes zero to its term. Diagonal is 1.
AffinityMatrix distance_affinity(const MatrixRef& points, const HomoPoly& p);

/// Unit-normalized gradients of p at each row; rows with a vanishing gradient are zero.
Matrix unit_gradients(const MatrixRef& points, const HomoPoly& p);

}  // namespace fsasc
