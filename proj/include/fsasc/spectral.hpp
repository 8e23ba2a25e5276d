#pragma once

#include <cstdint>
#include <vector>

#include "fsasc/affinity.hpp"
#include "fsasc/tensor_poly.hpp"

namespace fsasc {

struct LaplacianSpectrum {
  Vector eigenvalues;   ///< all N, non-decreasing
  Matrix eigenvectors;  ///< N x k, eigenvectors of the k smallest eigenvalues
};

/// L = I - Deg^{-1/2} W Deg^{-1/2}. Vertices of degree <= 1e-12 get an
/// identity row and column. W must be symmetric with entries >= -1e-12.
Matrix normalized_laplacian(const MatrixRef& weights);

/// Spectrum of the normalized Laplacian; `vector_count` eigenvectors of the
/// smallest eigenvalues are kept (0 skips the eigenvector computation).
LaplacianSpectrum laplacian_spectrum(const MatrixRef& weights, int vector_count = 0);

/// lambda_{n+1} - lambda_n of the normalized Laplacian (eigenvalues ascending,
/// 1-based). Requires N >= n + 1.
double eigengap_score(const MatrixRef& weights, int clusters);
double eigengap_from_spectrum(const Vector& ascending_eigenvalues, int clusters);

struct KMeansOptions {
  int restarts = 50;
  int max_iterations = 300;
  double relative_tolerance = 1e-9;
};

struct KMeansResult {
  std::vector<int> labels;
  Matrix centers;
  double inertia = 0.0;
};

/// Lloyd's algorithm with greedy k-means++ seeding, best inertia over restarts.
/// Deterministic for a fixed seed. Labels are renumbered by first appearance.
KMeansResult kmeans(const MatrixRef& rows, int k, std::uint64_t seed, const KMeansOptions& options = {});

/// Normalized spectral clustering: the `clusters` eigenvectors of smallest
/// eigenvalue, rows scaled to unit norm (numerically zero rows stay zero),
/// then k-means.
std::vector<int> spectral_cluster(const MatrixRef& weights, int clusters, std::uint64_t seed,
                                  const KMeansOptions& options = {});

}  // namespace fsasc
