#include "fsasc/serialize.hpp"

#include <cmath>
#include <string>

#include "fsasc/errors.hpp"

namespace fsasc {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const HomoPoly& p) {
  return {{"D", p.ambient_dim()},
          {"n", p.degree()},
          {"coeffs", std::vector<double>(p.coeffs().data(), p.coeffs().data() + p.coeffs().size())}};
}

HomoPoly homo_poly_from_json(const json& j) {
  try {
    const int dim = j.at("D").get<int>();
    const int degree = j.at("n").get<int>();
    const auto coeffs = j.at("coeffs").get<std::vector<double>>();
    Vector c = Eigen::Map<const Vector>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    return HomoPoly(MonomialBasis::get(dim, degree), std::move(c));
  } catch (const json::exception& e) {
    throw ParseError(std::string("HomoPoly JSON: ") + e.what());
  }
}

json to_json(const FsascParams& params) {
  return {{"n", params.subspaces},
          {"mu", params.min_cluster},
          {"gammas", params.gammas},
          {"seed", params.seed},
          {"kmeans_restarts", params.kmeans.restarts},
          {"kmeans_max_iterations", params.kmeans.max_iterations}};
}

FsascParams fsasc_params_from_json(const json& j) {
  FsascParams params;
  try {
    params.subspaces = j.at("n").get<int>();
    if (j.contains("mu")) params.min_cluster = j["mu"].get<int>();
    if (j.contains("gammas")) params.gammas = j["gammas"].get<std::vector<double>>();
    if (j.contains("seed")) params.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("FSASC parameters JSON: ") + e.what());
  }
  validate(params);
  return params;
}

json to_json(const SynthConfig& config) {
  return {{"D", config.ambient_dim},
          {"dims", config.dims},
          {"points_per_subspace", config.points_per_subspace},
          {"sigma", config.noise_sigma},
          {"seed", config.seed}};
}

json to_json(const ClusterResult& result) {
  json gaps = json::array();
  for (double g : result.gamma_eigengaps) gaps.push_back(finite_or_null(g));
  return {{"labels", result.labels},
          {"chosen_gamma", result.chosen_gamma},
          {"eigengap", result.eigengap},
          {"beta", result.beta},
          {"depths", result.depths},
          {"dimensions", result.dimensions},
          {"gamma_eigengaps", gaps},
          {"params", to_json(result.params)}};
}

json to_json(const FascOutput& output) {
  json clusters = json::array();
  for (std::size_t c = 0; c < output.clusters.size(); ++c)
    clusters.push_back({{"indices", output.clusters[c].indices},
                        {"dimension", output.clusters[c].dimension},
                        {"depth", output.depths.at(c)}});
  return {{"clusters", clusters}};
}

json to_json(const TrialMetrics& metrics) {
  return {{"error_pct", metrics.error_pct},
          {"intra_pct", optional_number(metrics.intra_pct)},
          {"inter_pct", optional_number(metrics.inter_pct)}};
}

json to_json(const EvalReport& report) {
  json per_trial = json::array();
  for (const auto& t : report.per_trial) per_trial.push_back(to_json(t));
  return {{"error_pct", report.error_pct},
          {"intra_pct", optional_number(report.intra_pct)},
          {"inter_pct", optional_number(report.inter_pct)},
          {"per_trial", per_trial}};
}

json to_json(const ExperimentReport& report) {
  json params = to_json(report.spec.params);
  params.erase("seed");
  if (const auto* config = std::get_if<SynthConfig>(&report.spec.generator)) {
    json gen = to_json(*config);
    gen.erase("seed");
    params["generator"] = gen;
  } else {
    params["generator"] = {{"input", std::get<std::filesystem::path>(report.spec.generator).string()},
                           {"projection_dim", report.spec.projection_dim}};
  }
  params["seed"] = report.spec.seed;

  json per_trial = json::array();
  for (const auto& r : report.per_trial) {
    json t = to_json(r.metrics);
    t["trial"] = r.trial;
    t["seed"] = r.seed;
    t["failed"] = r.failed;
    if (r.failed) t["failure"] = r.failure;
    t["chosen_gamma"] = optional_number(r.chosen_gamma);
    t["eigengap"] = optional_number(r.eigengap);
    per_trial.push_back(std::move(t));
  }
  return {{"method", std::string(to_string(report.method))},
          {"params", params},
          {"trials", report.spec.trials},
          {"mean_error_pct", report.summary.error_pct},
          {"intra_pct", optional_number(report.summary.intra_pct)},
          {"inter_pct", optional_number(report.summary.inter_pct)},
          {"failures", report.failures},
          {"per_trial", per_trial}};
}

json to_json(const LabeledCloud& cloud, const SynthConfig& config) {
  json bases = json::array();
  for (const auto& b : cloud.bases) {
    json cols = json::array();
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      cols.push_back(std::vector<double>(b.col(c).data(), b.col(c).data() + b.rows()));
    bases.push_back(std::move(cols));
  }
  return {{"config", to_json(config)}, {"labels", *cloud.cloud.labels}, {"bases", bases}};
}

}  // namespace fsasc
