#include "fsasc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "fsasc/errors.hpp"
#include "fsasc/rng.hpp"

namespace fsasc {
namespace {

// Stream tags keep the basis, point and noise draws of every subspace apart.
constexpr std::uint64_t kBasisStream = 1;
constexpr std::uint64_t kPointStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

}  // namespace

void validate(const SynthConfig& config) {
  require(config.ambient_dim >= 2, "SynthConfig: ambient dimension must be >= 2");
  require(!config.dims.empty(), "SynthConfig: need at least one subspace");
  for (int d : config.dims) {
    if (d < 1 || d >= config.ambient_dim)
      throw ContractError("SynthConfig: subspace dimension " + std::to_string(d) + " must lie in [1, " +
                          std::to_string(config.ambient_dim - 1) + "]");
    if (config.points_per_subspace < d)
      throw ContractError("SynthConfig: need at least d_i points per subspace");
  }
  require(std::isfinite(config.noise_sigma) && config.noise_sigma >= 0.0, "SynthConfig: sigma must be >= 0");
}

std::vector<Matrix> random_subspaces(int ambient_dim, const std::vector<int>& dims, std::uint64_t seed) {
  std::vector<Matrix> bases;
  bases.reserve(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int d = dims[i];
    if (d < 1 || d >= ambient_dim)
      throw ContractError("random_subspaces: dimension " + std::to_string(d) + " is not in [1, D-1]");
    Rng rng(Rng::derive(seed, {kBasisStream, i}));
    Matrix g(ambient_dim, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < ambient_dim; ++r) g(r, c) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    bases.push_back(qr.householderQ() * Matrix::Identity(ambient_dim, d));
  }
  return bases;
}

LabeledCloud sample_cloud(const SynthConfig& config) {
  validate(config);
  const int D = config.ambient_dim;
  const int per = config.points_per_subspace;
  const auto count = static_cast<Eigen::Index>(config.dims.size()) * per;

  LabeledCloud out;
  out.bases = random_subspaces(D, config.dims, config.seed);
  Matrix points(count, D);
  std::vector<int> labels(static_cast<std::size_t>(count));

  for (std::size_t i = 0; i < config.dims.size(); ++i) {
    const Matrix& basis = out.bases[i];
    const int d = config.dims[i];
    Rng point_rng(Rng::derive(config.seed, {kPointStream, i}));
    Rng noise_rng(Rng::derive(config.seed, {kNoiseStream, i}));
    const Matrix complement = Matrix::Identity(D, D) - basis * basis.transpose();
    for (int k = 0; k < per; ++k) {
      Vector coeffs(d);
      do {
        for (int c = 0; c < d; ++c) coeffs[c] = point_rng.normal();
      } while (coeffs.norm() == 0.0);
      Vector x = basis * coeffs;
      x /= x.norm();
      if (config.noise_sigma > 0.0) {
        Vector g(D);
        for (int r = 0; r < D; ++r) g[r] = config.noise_sigma * noise_rng.normal();
        x += complement * g;
      }
      const auto row = static_cast<Eigen::Index>(i) * per + k;
      points.row(row) = x.transpose();
      labels[static_cast<std::size_t>(row)] = static_cast<int>(i);
    }
  }
  out.cloud = make_cloud(std::move(points), std::move(labels));
  out.cloud.unit_normalized = config.noise_sigma == 0.0;
  check_transversal(out.bases, D);
  return out;
}

Vector principal_angles(const MatrixRef& a, const MatrixRef& b) {
  require(a.rows() == b.rows(), "principal_angles: bases live in different spaces");
  Eigen::JacobiSVD<Matrix> svd(a.transpose() * b);
  Vector cosines = svd.singularValues();
  Vector angles(cosines.size());
  for (Eigen::Index k = 0; k < cosines.size(); ++k) angles[k] = std::acos(std::clamp(cosines[k], -1.0, 1.0));
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

bool check_transversal(const std::vector<Matrix>& bases, int ambient_dim, double tolerance) {
  bool ok = true;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    for (std::size_t j = i + 1; j < bases.size(); ++j) {
      const Vector angles = principal_angles(bases[i], bases[j]);
      const auto generic = static_cast<Eigen::Index>(
          std::max<long>(0, bases[i].cols() + bases[j].cols() - ambient_dim));
      if (generic < angles.size() && angles[generic] < tolerance) {
        warn("synthgen: subspaces " + std::to_string(i) + " and " + std::to_string(j) +
             " are nearly non-transversal (principal angle " + std::to_string(angles[generic]) + ")");
        ok = false;
      }
    }
  }
  return ok;
}

}  // namespace fsasc
