#pragma once

#include <cstdint>
#include <vector>

#include "fsasc/point_cloud.hpp"

namespace fsasc {

struct SynthConfig {
  int ambient_dim = 5;
  std::vector<int> dims{2, 2, 2};
  int points_per_subspace = 100;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& config);

struct LabeledCloud {
  PointCloud cloud;          ///< labels always set
  std::vector<Matrix> bases; ///< D x d_i orthonormal basis per subspace
};

/// Orthonormal factor of a D x d_i standard Gaussian matrix for each entry of
/// `dims`. Subspace i draws from its own stream of `seed`.
std::vector<Matrix> random_subspaces(int ambient_dim, const std::vector<int>& dims, std::uint64_t seed);

/// Per subspace: unit-norm points uniform on the subspace's unit sphere, plus
/// Gaussian noise of standard deviation sigma projected onto the orthogonal
/// complement. Noisy points are not renormalized. Points are grouped by
/// subspace in order.
LabeledCloud sample_cloud(const SynthConfig& config);

/// Principal angles (radians, ascending) between the column spans of two
/// orthonormal bases.
Vector principal_angles(const MatrixRef& a, const MatrixRef& b);

/// Warns when two subspaces meet in more than the generic dimension
/// max(0, d_i + d_j - D), judged by a principal angle below `tolerance`.
/// Returns true when the arrangement looks transversal.
bool check_transversal(const std::vector<Matrix>& bases, int ambient_dim, double tolerance = 1e-6);

}  // namespace fsasc
