#pragma once

#include <optional>
#include <vector>

#include "fsasc/tensor_poly.hpp"

namespace fsasc {

/// Misclassification rate in percent under the best matching of predicted
/// to true labels. Labels must lie in [0, n). Exhaustive over permutations for
/// n <= 8, Hungarian assignment on the confusion matrix otherwise.
double clustering_error(const std::vector<int>& predicted, const std::vector<int>& truth, int n);

/// Minimum over ground-truth clusters of the second-smallest eigenvalue of the
/// normalized Laplacian of the cluster's induced subgraph, clamped to [0, 1],
/// in percent. Clusters with fewer than two points are skipped with a warning.
double intra_connectivity(const MatrixRef& weights, const std::vector<int>& truth);

/// Percentage of total absolute affinity mass on pairs from different
/// ground-truth clusters. Diagonal entries count as intra-cluster mass.
double inter_connectivity(const MatrixRef& weights, const std::vector<int>& truth);

/// Optimal assignment minimizing total cost; result[r] is the column given to row r.
/// Requires a square cost matrix.
std::vector<int> hungarian_assignment(const MatrixRef& cost);

struct TrialMetrics {
  double error_pct = 0.0;
  std::optional<double> intra_pct;
  std::optional<double> inter_pct;
};

struct EvalReport {
  double error_pct = 0.0;
  std::optional<double> intra_pct;
  std::optional<double> inter_pct;
  std::vector<TrialMetrics> per_trial;
};

/// Means over trials; connectivity means use only trials that report them.
EvalReport summarize(const std::vector<TrialMetrics>& trials);

}  // namespace fsasc
