#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fsasc/affinity.hpp"
#include "fsasc/evalmetrics.hpp"
#include "fsasc/filtration.hpp"
#include "fsasc/point_cloud.hpp"
#include "fsasc/synthgen.hpp"

namespace fsasc {

enum class Method { fsasc, sasc_d, sasc_a, fasc };

std::string_view to_string(Method method);
/// Accepts "fsasc", "sasc_d", "sasc_a", "fasc" (and the dashed spellings).
Method parse_method(std::string_view name);

// ---- point cloud files ------------------------------------------------------

enum class CloudFormat { automatic, csv, json };

/// CSV: one point per row, comma separated, optional header. A header column
/// named "label" (last column) holds integer ground-truth labels.
/// JSON: {"points": [[...], ...], "labels": [...]} with labels optional.
/// `automatic` picks by extension (.json, anything else is CSV).
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format = CloudFormat::automatic);
PointCloud parse_cloud_csv(std::istream& in);
PointCloud parse_cloud_json(std::string_view text);

void write_cloud_csv(const PointCloud& cloud, std::ostream& out);
std::string cloud_to_json(const PointCloud& cloud);

/// Dense CSV dump of a matrix, 17 significant digits.
void write_matrix_csv(const MatrixRef& values, std::ostream& out);

/// Formats a double with 17 significant digits.
std::string format_double(double value);

// ---- preprocessing -----------------------------------------------------------

/// Largest D' <= max_dim with M_n(D') <= N, never above `raw_dim`. Throws
/// ContractError when even M_n(2) exceeds N.
int auto_projection_dim(Eigen::Index count, int subspaces, int raw_dim, int max_dim = 8);

/// Projects onto the top `target_dim` right singular vectors of the raw data
/// matrix (no mean-centering) and unit-normalizes each row. Labels are kept.
PointCloud pca_project(const PointCloud& cloud, int target_dim);

// ---- methods -----------------------------------------------------------------

struct MethodOutput {
  std::vector<int> labels;
  std::optional<AffinityMatrix> affinity;  ///< symmetric affinity given to spectral clustering
  std::optional<ClusterResult> fsasc;
  std::optional<FascOutput> fasc;
};

/// Runs one clustering method on raw points (normalized internally).
MethodOutput run_method(const MatrixRef& points, Method method, const FsascParams& params);

// ---- experiments -------------------------------------------------------------

struct ExperimentSpec {
  std::variant<SynthConfig, std::filesystem::path> generator = SynthConfig{};
  Method method = Method::fsasc;
  FsascParams params{};
  int trials = 50;
  std::uint64_t seed = 0;
  /// Input files only: 0 disables projection, -1 selects the automatic rule.
  int projection_dim = 0;
  std::optional<std::filesystem::path> output;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  TrialMetrics metrics;
  std::optional<double> chosen_gamma;
  std::optional<double> eigengap;
};

struct ExperimentReport {
  Method method = Method::fsasc;
  ExperimentSpec spec;
  EvalReport summary;
  int failures = 0;
  std::vector<TrialRecord> per_trial;
};

/// Seed of trial `trial` of an experiment seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Runs a single seeded trial: generate (or load), cluster, evaluate.
TrialRecord run_trial(const ExperimentSpec& spec, int trial);

/// Runs every trial (concurrently when workers are available), aggregates the
/// metrics and, when spec.output is set, writes the JSON report there and the
/// per-trial CSV next to it (same stem, .csv).
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace fsasc
