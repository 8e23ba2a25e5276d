#pragma once

#include <json.hpp>

#include "fsasc/evalmetrics.hpp"
#include "fsasc/filtration.hpp"
#include "fsasc/pipeline.hpp"
#include "fsasc/synthgen.hpp"
#include "fsasc/tensor_poly.hpp"

namespace fsasc {

/// {"D": ..., "n": ..., "coeffs": [...]} with coefficients in canonical monomial order.
nlohmann::json to_json(const HomoPoly& p);
HomoPoly homo_poly_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FsascParams& params);
FsascParams fsasc_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SynthConfig& config);

/// {"labels", "chosen_gamma", "eigengap", "depths", "dimensions", "beta", "gamma_eigengaps", "params"}
nlohmann::json to_json(const ClusterResult& result);

nlohmann::json to_json(const FascOutput& output);

nlohmann::json to_json(const TrialMetrics& metrics);
nlohmann::json to_json(const EvalReport& report);

/// {"method", "params", "trials", "mean_error_pct", "intra_pct", "inter_pct",
///  "failures", "per_trial": [...]}. No timestamps: identical specs give
/// identical documents.
nlohmann::json to_json(const ExperimentReport& report);

/// Sidecar for generated clouds: {"config", "labels", "bases": [[[...]]]}.
nlohmann::json to_json(const LabeledCloud& cloud, const SynthConfig& config);

}  // namespace fsasc
