#include "fsasc/evalmetrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "fsasc/errors.hpp"
#include "fsasc/spectral.hpp"

namespace fsasc {
namespace {

constexpr int kExhaustiveLimit = 8;

Eigen::MatrixXi confusion(const std::vector<int>& predicted, const std::vector<int>& truth, int n) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (std::size_t j = 0; j < predicted.size(); ++j) {
    if (predicted[j] < 0 || predicted[j] >= n || truth[j] < 0 || truth[j] >= n)
      throw ContractError("clustering_error: label at position " + std::to_string(j) + " outside [0, " +
                          std::to_string(n) + ")");
    ++m(predicted[j], truth[j]);
  }
  return m;
}

}  // namespace

std::vector<int> hungarian_assignment(const MatrixRef& cost) {
  require(cost.rows() == cost.cols(), "hungarian_assignment: cost matrix must be square");
  const int n = static_cast<int>(cost.rows());
  // Shortest augmenting path formulation with potentials (1-based internally).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[col0] = true;
      const int r = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double reduced = cost(r - 1, c - 1) - u[r] - v[c];
        if (reduced < minv[c]) {
          minv[c] = reduced;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int c = 1; c <= n; ++c)
    if (match[c] > 0) assignment[match[c] - 1] = c - 1;
  return assignment;
}

double clustering_error(const std::vector<int>& predicted, const std::vector<int>& truth, int n) {
  if (predicted.size() != truth.size())
    throw ContractError("clustering_error: " + std::to_string(predicted.size()) + " predictions for " +
                        std::to_string(truth.size()) + " labels");
  require(n >= 1, "clustering_error: n must be >= 1");
  if (predicted.empty()) return 0.0;
  const Eigen::MatrixXi m = confusion(predicted, truth, n);

  long best_correct = 0;
  if (n <= kExhaustiveLimit) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      long correct = 0;
      for (int p = 0; p < n; ++p) correct += m(p, perm[p]);
      best_correct = std::max(best_correct, correct);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    const Matrix cost = -m.cast<double>();
    const auto assignment = hungarian_assignment(cost);
    for (int p = 0; p < n; ++p) best_correct += m(p, assignment[p]);
  }
  const auto total = static_cast<double>(predicted.size());
  return 100.0 * (total - static_cast<double>(best_correct)) / total;
}

double intra_connectivity(const MatrixRef& weights, const std::vector<int>& truth) {
  require(weights.rows() == weights.cols(), "intra_connectivity: weight matrix must be square");
  if (static_cast<Eigen::Index>(truth.size()) != weights.rows())
    throw ContractError("intra_connectivity: label count does not match matrix size");
  const int clusters = truth.empty() ? 0 : *std::max_element(truth.begin(), truth.end()) + 1;
  double minimum = std::numeric_limits<double>::infinity();
  for (int c = 0; c < clusters; ++c) {
    std::vector<int> members;
    for (std::size_t j = 0; j < truth.size(); ++j)
      if (truth[j] == c) members.push_back(static_cast<int>(j));
    if (members.size() < 2) {
      if (!members.empty())
        warn("intra_connectivity: cluster " + std::to_string(c) + " has fewer than two points, skipped");
      continue;
    }
    Matrix sub(members.size(), members.size());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b) sub(a, b) = weights(members[a], members[b]);
    const double lambda2 = laplacian_spectrum(sub).eigenvalues[1];
    minimum = std::min(minimum, std::clamp(lambda2, 0.0, 1.0));
  }
  if (!std::isfinite(minimum)) return 0.0;
  return 100.0 * minimum;
}

double inter_connectivity(const MatrixRef& weights, const std::vector<int>& truth) {
  require(weights.rows() == weights.cols(), "inter_connectivity: weight matrix must be square");
  if (static_cast<Eigen::Index>(truth.size()) != weights.rows())
    throw ContractError("inter_connectivity: label count does not match matrix size");
  double total = 0.0;
  double cross = 0.0;
  for (Eigen::Index c = 0; c < weights.cols(); ++c) {
    for (Eigen::Index r = 0; r < weights.rows(); ++r) {
      const double w = std::abs(weights(r, c));
      total += w;
      if (truth[r] != truth[c]) cross += w;
    }
  }
  return total > 0.0 ? 100.0 * cross / total : 0.0;
}

EvalReport summarize(const std::vector<TrialMetrics>& trials) {
  EvalReport report;
  report.per_trial = trials;
  if (trials.empty()) return report;
  double error = 0.0, intra = 0.0, inter = 0.0;
  int intra_count = 0, inter_count = 0;
  for (const auto& t : trials) {
    error += t.error_pct;
    if (t.intra_pct) {
      intra += *t.intra_pct;
      ++intra_count;
    }
    if (t.inter_pct) {
      inter += *t.inter_pct;
      ++inter_count;
    }
  }
  report.error_pct = error / static_cast<double>(trials.size());
  if (intra_count > 0) report.intra_pct = intra / intra_count;
  if (inter_count > 0) report.inter_pct = inter / inter_count;
  return report;
}

}  // namespace fsasc
