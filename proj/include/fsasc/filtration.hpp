#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fsasc/affinity.hpp"
#include "fsasc/spectral.hpp"
#include "fsasc/tensor_poly.hpp"

namespace fsasc {

/// Threshold grid used when none is given.
inline const std::vector<double> kDefaultGammas{0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0};

struct FsascParams {
  int subspaces = 2;                          ///< n, also the polynomial degree
  int min_cluster = 10;                       ///< mu, smallest admissible survivor set
  std::vector<double> gammas = kDefaultGammas;
  double delta = 0.0;                         ///< survival threshold gamma * beta for one filtration
  std::uint64_t seed = 0;                     ///< seeds the spectral clustering k-means
  /// Nonzero: rotate each hyperplane's complement basis by a random orthogonal
  /// matrix derived from this value. Results must not depend on it.
  std::uint64_t basis_twist = 0;
  KMeansOptions kmeans{};
};

/// Throws ContractError unless subspaces >= 1, min_cluster >= 1 and all gammas > 0.
void validate(const FsascParams& params);

enum class Termination {
  reference_dropped_first_step,
  reference_dropped,
  too_few_points_mu,
  too_few_points_veronese,
  dimension_floor,
};

std::string_view to_string(Termination t);

/// One affinity row produced by the filtration anchored at a reference point.
struct FiltrationRow {
  Vector values;  ///< projected norms of the points that survived the last completed step
  int depth = 0;  ///< completed steps
  Termination terminated_by = Termination::dimension_floor;
};

/// Runs the filtration for reference `reference` over unit-norm `points`,
/// starting from the polynomial `p` fitted on all points and the threshold
/// `params.delta`. At each step the hyperplane normal is the unit gradient of
/// the current polynomial at the reference image; points whose relative norm
/// drop exceeds delta are filtered out, survivors' projected norms are
/// recorded, and the polynomial is refitted on the projected survivors.
FiltrationRow filtration_row(const MatrixRef& points, Eigen::Index reference, const HomoPoly& p,
                             const FsascParams& params);

/// (||y|| - ||pi(y)||) / ||y|| for projection onto normal^perp, evaluated
/// without cancellation. `normal` must be unit norm. Zero vectors count as fully dropped.
double relative_norm_drop(const VectorRef& y, const VectorRef& normal);

struct ClusterResult {
  std::vector<int> labels;
  std::vector<int> dimensions;  ///< per-point subspace dimension estimate D - depth
  std::vector<int> depths;      ///< per-point filtration depth under the chosen gamma
  double chosen_gamma = 0.0;
  double eigengap = 0.0;
  double beta = 0.0;
  std::vector<double> gamma_eigengaps;  ///< one per gamma; NaN where the gamma was skipped
  AffinityMatrix affinity;              ///< the selected C (not symmetrized)
  FsascParams params;
};

/// Filtrated spectral clustering of `points` (rows; normalized internally)
/// into params.subspaces groups. Requires N >= M_n(D).
ClusterResult fsasc(const MatrixRef& points, const FsascParams& params);

struct FascCluster {
  std::vector<int> indices;
  int dimension = 0;
};

struct FascOutput {
  std::vector<FascCluster> clusters;
  std::vector<int> depths;  ///< filtration depth of each cluster's reference, same order as clusters

  /// Label of each of the `count` points: index of the cluster containing it.
  std::vector<int> labels(std::size_t count) const;
};

/// Exact filtrated clustering for noiseless data in general position on a
/// transversal union of `subspaces` linear subspaces.
FascOutput fasc(const MatrixRef& points, int subspaces);

/// Tolerance on |<b, y>| deciding hyperplane membership in `fasc`.
inline constexpr double kMembershipTolerance = 1e-9;
/// Relative singular-value cutoff for the numerical rank of the last cluster.
inline constexpr double kRankTolerance = 1e-8;

}  // namespace fsasc
