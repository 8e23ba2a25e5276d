#include "fsasc/spectral.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "fsasc/errors.hpp"
#include "fsasc/rng.hpp"

namespace fsasc {
namespace {

constexpr double kIsolatedDegree = 1e-12;

void check_weights(const MatrixRef& w) {
  require(w.rows() == w.cols(), "normalized_laplacian: weight matrix must be square");
  require(w.rows() >= 1, "normalized_laplacian: empty weight matrix");
  if (w.minCoeff() < -1e-12) throw ContractError("normalized_laplacian: negative weight");
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ContractError("normalized_laplacian: weight matrix is not symmetric");
}

// Renumber labels so cluster ids appear in increasing order of first use.
void relabel_by_first_use(std::vector<int>& labels, Matrix* centers) {
  std::vector<int> map;
  int next = 0;
  for (int l : labels) {
    if (l >= static_cast<int>(map.size())) map.resize(l + 1, -1);
    if (map[l] < 0) map[l] = next++;
  }
  for (int& l : labels) l = map[l];
  if (centers) {
    Matrix reordered = *centers;
    for (int old = 0; old < static_cast<int>(map.size()); ++old)
      if (map[old] >= 0) reordered.row(map[old]) = centers->row(old);
    *centers = std::move(reordered);
  }
}

Matrix seed_centers(const MatrixRef& rows, int k, Rng& rng) {
  const Eigen::Index n = rows.rows();
  Matrix centers(k, rows.cols());
  centers.row(0) = rows.row(static_cast<Eigen::Index>(rng.below(n)));
  Vector closest = (rows.rowwise() - centers.row(0)).rowwise().squaredNorm();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));

  for (int c = 1; c < k; ++c) {
    const double potential = closest.sum();
    Eigen::Index best_index = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    Vector best_closest;
    for (int t = 0; t < trials; ++t) {
      Eigen::Index candidate;
      if (potential <= 0.0) {
        candidate = static_cast<Eigen::Index>(rng.below(n));
      } else {
        const double target = rng.uniform() * potential;
        double acc = 0.0;
        candidate = n - 1;
        for (Eigen::Index j = 0; j < n; ++j) {
          acc += closest[j];
          if (acc > target) {
            candidate = j;
            break;
          }
        }
      }
      Vector trial = (rows.rowwise() - rows.row(candidate)).rowwise().squaredNorm();
      trial = trial.cwiseMin(closest);
      const double trial_potential = trial.sum();
      if (trial_potential < best_potential) {
        best_potential = trial_potential;
        best_index = candidate;
        best_closest = std::move(trial);
      }
    }
    centers.row(c) = rows.row(best_index);
    closest = std::move(best_closest);
  }
  return centers;
}

KMeansResult lloyd(const MatrixRef& rows, Matrix centers, const KMeansOptions& options) {
  const Eigen::Index n = rows.rows();
  const int k = static_cast<int>(centers.rows());
  KMeansResult out;
  out.labels.assign(n, 0);
  double previous = std::numeric_limits<double>::infinity();
  Vector dist(n);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double inertia = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (rows.row(j) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      out.labels[j] = best;
      dist[j] = best_d;
      inertia += best_d;
    }
    out.inertia = inertia;
    if (previous - inertia <= options.relative_tolerance * std::max(previous, 1e-300) && iter > 0) break;
    previous = inertia;

    Matrix sums = Matrix::Zero(k, rows.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index j = 0; j < n; ++j) {
      sums.row(out.labels[j]) += rows.row(j);
      ++counts[out.labels[j]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / counts[c];
      } else {
        // Empty cluster: move its center to the point farthest from its own center.
        Eigen::Index far;
        dist.maxCoeff(&far);
        centers.row(c) = rows.row(far);
        dist[far] = 0.0;
      }
    }
  }
  out.centers = std::move(centers);
  return out;
}

}  // namespace

Matrix normalized_laplacian(const MatrixRef& weights) {
  check_weights(weights);
  const Eigen::Index n = weights.rows();
  const Vector degree = weights.rowwise().sum();
  Vector inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt[i] = degree[i] > kIsolatedDegree ? 1.0 / std::sqrt(degree[i]) : 0.0;
  Matrix lap = -(inv_sqrt.asDiagonal() * weights * inv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (degree[i] > kIsolatedDegree) continue;
    lap.row(i).setZero();
    lap.col(i).setZero();
    lap(i, i) = 1.0;
  }
  return lap;
}

LaplacianSpectrum laplacian_spectrum(const MatrixRef& weights, int vector_count) {
  const Matrix lap = normalized_laplacian(weights);
  require(vector_count >= 0 && vector_count <= lap.rows(), "laplacian_spectrum: bad eigenvector count");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(lap, vector_count > 0 ? Eigen::ComputeEigenvectors
                                                                     : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("laplacian_spectrum: eigensolver failed on a " + std::to_string(lap.rows()) +
                         "-vertex Laplacian");
  LaplacianSpectrum out;
  out.eigenvalues = solver.eigenvalues();
  if (vector_count > 0) out.eigenvectors = solver.eigenvectors().leftCols(vector_count);
  return out;
}

double eigengap_from_spectrum(const Vector& ascending_eigenvalues, int clusters) {
  require(clusters >= 1, "eigengap_score: cluster count must be >= 1");
  if (ascending_eigenvalues.size() <= clusters)
    throw ContractError("eigengap_score: need more than " + std::to_string(clusters) + " vertices");
  return ascending_eigenvalues[clusters] - ascending_eigenvalues[clusters - 1];
}

double eigengap_score(const MatrixRef& weights, int clusters) {
  require(clusters >= 1, "eigengap_score: cluster count must be >= 1");
  if (weights.rows() <= clusters)
    throw ContractError("eigengap_score: need more than " + std::to_string(clusters) + " vertices");
  return eigengap_from_spectrum(laplacian_spectrum(weights).eigenvalues, clusters);
}

KMeansResult kmeans(const MatrixRef& rows, int k, std::uint64_t seed, const KMeansOptions& options) {
  require(k >= 1, "kmeans: k must be >= 1");
  require(rows.rows() >= k, "kmeans: fewer rows than clusters");
  require(options.restarts >= 1 && options.max_iterations >= 1, "kmeans: bad options");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(Rng::derive(seed, {0x6b6d65616e73ULL, static_cast<std::uint64_t>(r)}));
    auto result = lloyd(rows, seed_centers(rows, k, rng), options);
    if (result.inertia < best.inertia) best = std::move(result);
  }
  relabel_by_first_use(best.labels, &best.centers);
  return best;
}

std::vector<int> spectral_cluster(const MatrixRef& weights, int clusters, std::uint64_t seed,
                                  const KMeansOptions& options) {
  require(clusters >= 1, "spectral_cluster: cluster count must be >= 1");
  const Eigen::Index n = weights.rows();
  require(n >= clusters, "spectral_cluster: fewer points than clusters");
  if (clusters == 1) return std::vector<int>(n, 0);
  if (n == clusters) {
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return labels;
  }
  Matrix embedding = laplacian_spectrum(weights, clusters).eigenvectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = embedding.row(j).norm();
    if (norm > 1e-12) embedding.row(j) /= norm;
    else embedding.row(j).setZero();
  }
  return kmeans(embedding, clusters, seed, options).labels;
}

}  // namespace fsasc
