#include "fsasc/filtration.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "fsasc/errors.hpp"
#include "fsasc/parallel.hpp"
#include "fsasc/point_cloud.hpp"
#include "fsasc/projgeom.hpp"
#include "fsasc/rng.hpp"
#include "fsasc/vanish.hpp"

namespace fsasc {
namespace {

constexpr double kGradientFloor = 1e-12;
// A candidate polynomial counts as having a nonzero gradient above this norm.
constexpr double kCandidateGradientFloor = 1e-6;

Matrix random_orthogonal(Eigen::Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

HyperplaneProjection make_step(const Vector& normal, const FsascParams& params, Eigen::Index reference, int step) {
  HyperplaneProjection pi(normal);
  if (params.basis_twist == 0 || pi.basis().rows() == 0) return pi;
  Rng rng(Rng::derive(params.basis_twist,
                      {static_cast<std::uint64_t>(reference), static_cast<std::uint64_t>(step)}));
  return pi.rotated(random_orthogonal(pi.basis().rows(), rng));
}

// Unit normal of the lowest-degree candidate combination with a nonzero
// gradient at x. Within one degree, the combination maximizing the gradient
// norm is used: its gradient direction is the top left singular vector of
// the matrix of candidate gradients.
std::optional<Vector> pick_normal(const std::vector<HomoPoly>& candidates, const Vector& x) {
  std::size_t begin = 0;
  while (begin < candidates.size()) {
    const int degree = candidates[begin].degree();
    std::size_t end = begin;
    while (end < candidates.size() && candidates[end].degree() == degree) ++end;
    Matrix grads(x.size(), static_cast<Eigen::Index>(end - begin));
    for (std::size_t i = begin; i < end; ++i) grads.col(static_cast<Eigen::Index>(i - begin)) = candidates[i].gradient(x);
    Eigen::JacobiSVD<Matrix> svd(grads, Eigen::ComputeThinU);
    if (svd.singularValues()[0] > kCandidateGradientFloor) return Vector(svd.matrixU().col(0));
    begin = end;
  }
  return std::nullopt;
}

int numerical_rank(const MatrixRef& points) {
  if (points.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(points);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > kRankTolerance * s[0]) ++rank;
  return rank;
}

}  // namespace

void validate(const FsascParams& params) {
  require(params.subspaces >= 1, "FsascParams: number of subspaces must be >= 1");
  require(params.min_cluster >= 1, "FsascParams: mu must be >= 1");
  require(!params.gammas.empty(), "FsascParams: gamma grid is empty");
  for (double g : params.gammas)
    require(std::isfinite(g) && g > 0.0, "FsascParams: gammas must be positive");
  require(std::isfinite(params.delta) && params.delta >= 0.0, "FsascParams: delta must be >= 0");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::reference_dropped_first_step: return "reference_dropped_first_step";
    case Termination::reference_dropped: return "reference_dropped";
    case Termination::too_few_points_mu: return "too_few_points_mu";
    case Termination::too_few_points_veronese: return "too_few_points_veronese";
    case Termination::dimension_floor: return "dimension_floor";
  }
  return "unknown";
}

double relative_norm_drop(const VectorRef& y, const VectorRef& normal) {
  const double norm = y.norm();
  if (norm == 0.0) return 1.0;
  const double t = std::min(1.0, std::abs(normal.dot(y)) / norm);
  // 1 - sqrt(1 - t^2), rewritten to avoid cancellation for small t.
  return t * t / (1.0 + std::sqrt((1.0 - t) * (1.0 + t)));
}

FiltrationRow filtration_row(const MatrixRef& points, Eigen::Index reference, const HomoPoly& p,
                             const FsascParams& params) {
  const Eigen::Index count = points.rows();
  const int ambient = static_cast<int>(points.cols());
  require(reference >= 0 && reference < count, "filtration_row: reference index out of range");
  require(p.ambient_dim() == ambient, "filtration_row: polynomial dimension does not match points");
  require(params.min_cluster >= 1, "filtration_row: mu must be >= 1");
  const int degree = params.subspaces;
  const double delta = params.delta;

  FiltrationRow row{Vector::Zero(count), 0, Termination::dimension_floor};
  std::vector<int> active(count);
  std::iota(active.begin(), active.end(), 0);
  Matrix current = points;
  Eigen::Index ref_pos = reference;
  HomoPoly q = p;
  int d = ambient;

  while (d > 1) {
    const Vector x = current.row(ref_pos).transpose();
    const Vector g = q.gradient(x);
    const double g_norm = g.norm();
    if (!(g_norm > kGradientFloor)) {
      row.terminated_by = Termination::reference_dropped;
      return row;
    }
    const Vector normal = g / g_norm;
    const HyperplaneProjection pi = make_step(normal, params, reference, row.depth);

    if (relative_norm_drop(x, normal) > delta) {
      if (d == ambient) {
        row.values = pi.apply_rows(current).rowwise().norm();
        row.terminated_by = Termination::reference_dropped_first_step;
      } else {
        row.terminated_by = Termination::reference_dropped;
      }
      return row;
    }

    std::vector<int> keep;
    keep.reserve(current.rows());
    for (Eigen::Index r = 0; r < current.rows(); ++r)
      if (relative_norm_drop(current.row(r).transpose(), normal) <= delta) keep.push_back(static_cast<int>(r));
    if (static_cast<int>(keep.size()) < params.min_cluster) {
      row.terminated_by = Termination::too_few_points_mu;
      return row;
    }

    Matrix projected = pi.apply_rows(select_rows(current, keep));
    row.values.setZero();
    std::vector<int> next_active(keep.size());
    Eigen::Index next_ref = -1;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      next_active[i] = active[keep[i]];
      row.values[next_active[i]] = projected.row(static_cast<Eigen::Index>(i)).norm();
      if (keep[i] == ref_pos) next_ref = static_cast<Eigen::Index>(i);
    }
    ++row.depth;

    if (keep.size() < monomial_count(d, degree)) {
      row.terminated_by = Termination::too_few_points_veronese;
      return row;
    }
    --d;
    active = std::move(next_active);
    current = std::move(projected);
    ref_pos = next_ref;
    if (d == 1) break;
    q = fit_vanishing(embed_data(current, degree), current.row(ref_pos).transpose());
  }
  row.terminated_by = Termination::dimension_floor;
  return row;
}

ClusterResult fsasc(const MatrixRef& raw_points, const FsascParams& params) {
  validate(params);
  const int n = params.subspaces;
  const Eigen::Index count = raw_points.rows();
  require(raw_points.cols() >= 2, "fsasc: ambient dimension must be >= 2");
  const int ambient = static_cast<int>(raw_points.cols());
  const auto needed = monomial_count(ambient, n);
  if (static_cast<std::uint64_t>(count) < needed)
    throw ContractError("fsasc: not enough points: N=" + std::to_string(count) + " but M_" + std::to_string(n) +
                        "(" + std::to_string(ambient) + ")=" + std::to_string(needed));

  const Matrix points = unit_normalize(make_cloud(Matrix(raw_points))).points;
  const HomoPoly p = fit_vanishing(embed_data(points, n));

  ClusterResult result{};
  result.params = params;
  result.beta = beta_statistic(points, p);
  result.gamma_eigengaps.assign(params.gammas.size(), std::numeric_limits<double>::quiet_NaN());

  bool have_best = false;
  Matrix best_affinity;
  std::vector<int> best_depths;
  for (std::size_t k = 0; k < params.gammas.size(); ++k) {
    FsascParams run = params;
    run.delta = result.beta * params.gammas[k];

    Matrix affinity(count, count);
    std::vector<int> depths(count);
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
      auto row = filtration_row(points, static_cast<Eigen::Index>(j), p, run);
      affinity.row(static_cast<Eigen::Index>(j)) = row.values.transpose();
      depths[j] = row.depth;
    });

    const Matrix symmetric = affinity + affinity.transpose();
    if (!(symmetric.maxCoeff() > 0.0)) {
      warn("fsasc: all-zero affinity for gamma=" + std::to_string(params.gammas[k]) + ", skipped");
      continue;
    }
    const double gap = eigengap_from_spectrum(laplacian_spectrum(symmetric).eigenvalues, n);
    result.gamma_eigengaps[k] = gap;
    if (!have_best || gap > result.eigengap) {
      have_best = true;
      result.eigengap = gap;
      result.chosen_gamma = params.gammas[k];
      best_affinity = std::move(affinity);
      best_depths = std::move(depths);
    }
  }
  if (!have_best) throw NumericalError("fsasc: every gamma produced an all-zero affinity");

  result.labels = spectral_cluster(best_affinity + best_affinity.transpose(), n, params.seed, params.kmeans);
  result.depths = std::move(best_depths);
  result.dimensions.resize(result.depths.size());
  for (std::size_t j = 0; j < result.depths.size(); ++j) result.dimensions[j] = ambient - result.depths[j];
  result.affinity = AffinityMatrix{std::move(best_affinity), AffinityKind::filtrated};
  return result;
}

std::vector<int> FascOutput::labels(std::size_t count) const {
  std::vector<int> out(count, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (int idx : clusters[c].indices) out[static_cast<std::size_t>(idx)] = static_cast<int>(c);
  return out;
}

FascOutput fasc(const MatrixRef& raw_points, int subspaces) {
  require(subspaces >= 1, "fasc: number of subspaces must be >= 1");
  require(raw_points.cols() >= 2, "fasc: ambient dimension must be >= 2");
  const Matrix points = unit_normalize(make_cloud(Matrix(raw_points))).points;
  const Eigen::Index count = points.rows();
  const int ambient = static_cast<int>(points.cols());

  FascOutput out;
  std::vector<int> remaining(count);
  std::iota(remaining.begin(), remaining.end(), 0);

  for (int i = 0; i + 1 < subspaces && !remaining.empty(); ++i) {
    const int reference = remaining.front();
    Matrix current = select_rows(points, remaining);
    Eigen::Index ref_pos = 0;
    ProjectionChain chain;
    int d = ambient;

    while (true) {
      const Vector x = current.row(ref_pos).transpose();
      const auto normal = pick_normal(null_candidates(current, subspaces), x);
      if (!normal) {
        if (chain.empty())
          throw NumericalError("fasc: no vanishing polynomial with nonzero gradient at reference point " +
                               std::to_string(reference) + " (data not in general position?)");
        break;
      }
      HyperplaneProjection pi(*normal);
      std::vector<int> keep;
      for (Eigen::Index r = 0; r < current.rows(); ++r)
        if (r == ref_pos || std::abs(pi.normal().dot(current.row(r))) <= kMembershipTolerance)
          keep.push_back(static_cast<int>(r));
      Eigen::Index next_ref = 0;
      for (std::size_t k = 0; k < keep.size(); ++k)
        if (keep[k] == ref_pos) next_ref = static_cast<Eigen::Index>(k);
      current = pi.apply_rows(select_rows(current, keep));
      ref_pos = next_ref;
      chain.push(std::move(pi));
      --d;
      if (d == 0) break;
    }

    // A point belongs to the reference's subspace when the chain leaves its
    // norm intact; the deficit is accumulated as the squared normal components.
    const double tolerance = kMembershipTolerance * std::sqrt(static_cast<double>(chain.size()));
    FascCluster cluster{{}, d};
    std::vector<int> rest;
    for (int idx : remaining) {
      Vector y = points.row(idx).transpose();
      double residual = 0.0;
      for (const auto& step : chain.steps()) {
        const double c = step.normal().dot(y);
        residual += c * c;
        y = step.apply(y);
      }
      if (idx == reference || std::sqrt(residual) <= tolerance)
        cluster.indices.push_back(idx);
      else
        rest.push_back(idx);
    }
    out.clusters.push_back(std::move(cluster));
    out.depths.push_back(static_cast<int>(chain.size()));
    remaining = std::move(rest);
  }

  if (!remaining.empty()) {
    const int rank = numerical_rank(select_rows(points, remaining));
    out.clusters.push_back({remaining, rank});
    out.depths.push_back(ambient - rank);
  } else if (static_cast<int>(out.clusters.size()) < subspaces) {
    warn("fasc: all points were assigned before the last cluster; returning fewer clusters");
  }
  return out;
}

}  // namespace fsasc
