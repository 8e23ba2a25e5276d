#include "fsasc/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/SVD>

#include "fsasc/errors.hpp"
#include "fsasc/parallel.hpp"
#include "fsasc/rng.hpp"
#include "fsasc/serialize.hpp"
#include "fsasc/spectral.hpp"
#include "fsasc/vanish.hpp"

namespace fsasc {
namespace {

constexpr std::uint64_t kKMeansStream = 0x6b6d;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                          : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_number(const std::string& field, double& value) {
  if (field.empty()) return false;
  const char* begin = field.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::fsasc: return "fsasc";
    case Method::sasc_d: return "sasc_d";
    case Method::sasc_a: return "sasc_a";
    case Method::fasc: return "fasc";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "fsasc") return Method::fsasc;
  if (name == "sasc_d" || name == "sasc-d") return Method::sasc_d;
  if (name == "sasc_a" || name == "sasc-a") return Method::sasc_a;
  if (name == "fasc") return Method::fasc;
  throw ContractError("unknown method '" + std::string(name) + "' (expected fsasc, sasc_d, sasc_a or fasc)");
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

PointCloud parse_cloud_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  bool has_label = false;
  bool seen_first = false;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (!seen_first) {
      seen_first = true;
      double probe;
      const bool is_header = std::any_of(fields.begin(), fields.end(),
                                         [&](const std::string& f) { return !parse_number(f, probe); });
      width = fields.size();
      if (is_header) {
        has_label = fields.back() == "label";
        continue;
      }
    }
    if (fields.size() != width)
      throw ParseError("row at line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(width),
                       line_no);
    const std::size_t coords = has_label ? width - 1 : width;
    std::vector<double> row(coords);
    for (std::size_t k = 0; k < coords; ++k)
      if (!parse_number(fields[k], row[k]))
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + fields[k] + "' as a number",
                         line_no);
    if (has_label) {
      double label;
      if (!parse_number(fields.back(), label) || label < 0 || label != static_cast<int>(label))
        throw ParseError("line " + std::to_string(line_no) + ": label '" + fields.back() +
                             "' is not a non-negative integer",
                         line_no);
      labels.push_back(static_cast<int>(label));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");
  Matrix points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) points(r, c) = rows[r][c];
  if (points.cols() < 2) throw ParseError("points need at least two coordinates");
  return make_cloud(std::move(points), has_label ? std::optional(std::move(labels)) : std::nullopt);
}

PointCloud parse_cloud_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
    throw ParseError("JSON cloud must be an object with a \"points\" array");
  const auto& pts = doc["points"];
  if (pts.empty()) throw ParseError("no data rows");
  const std::size_t width = pts.front().size();
  Matrix points(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < pts.size(); ++r) {
    if (!pts[r].is_array() || pts[r].size() != width)
      throw ParseError("point " + std::to_string(r) + " has " + std::to_string(pts[r].size()) +
                       " coordinates, expected " + std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      if (!pts[r][c].is_number()) throw ParseError("point " + std::to_string(r) + " has a non-numeric coordinate");
      points(r, c) = pts[r][c].get<double>();
    }
  }
  if (points.cols() < 2) throw ParseError("points need at least two coordinates");
  std::optional<std::vector<int>> labels;
  if (doc.contains("labels") && !doc["labels"].is_null()) {
    try {
      labels = doc["labels"].get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("labels: ") + e.what());
    }
  }
  return make_cloud(std::move(points), std::move(labels));
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  if (format == CloudFormat::automatic) format = path.extension() == ".json" ? CloudFormat::json : CloudFormat::csv;
  if (format == CloudFormat::json) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_cloud_json(buffer.str());
  }
  return parse_cloud_csv(in);
}

void write_cloud_csv(const PointCloud& cloud, std::ostream& out) {
  for (int c = 0; c < cloud.dim(); ++c) out << (c ? "," : "") << 'x' << (c + 1);
  if (cloud.labels) out << ",label";
  out << '\n';
  for (Eigen::Index r = 0; r < cloud.size(); ++r) {
    for (int c = 0; c < cloud.dim(); ++c) out << (c ? "," : "") << format_double(cloud.points(r, c));
    if (cloud.labels) out << ',' << (*cloud.labels)[static_cast<std::size_t>(r)];
    out << '\n';
  }
}

std::string cloud_to_json(const PointCloud& cloud) {
  nlohmann::json doc;
  auto& pts = doc["points"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < cloud.size(); ++r) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < cloud.dim(); ++c) row.push_back(cloud.points(r, c));
    pts.push_back(std::move(row));
  }
  if (cloud.labels) doc["labels"] = *cloud.labels;
  return doc.dump();
}

void write_matrix_csv(const MatrixRef& values, std::ostream& out) {
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) out << (c ? "," : "") << format_double(values(r, c));
    out << '\n';
  }
}

int auto_projection_dim(Eigen::Index count, int subspaces, int raw_dim, int max_dim) {
  require(subspaces >= 1, "auto_projection_dim: subspaces must be >= 1");
  const int top = std::min(max_dim, raw_dim);
  for (int d = top; d >= 2; --d)
    if (monomial_count(d, subspaces) <= static_cast<std::uint64_t>(count)) return d;
  throw ContractError("auto_projection_dim: " + std::to_string(count) + " points are too few for " +
                      std::to_string(subspaces) + " subspaces even in R^2");
}

PointCloud pca_project(const PointCloud& cloud, int target_dim) {
  require(target_dim >= 1, "pca_project: target dimension must be >= 1");
  if (target_dim > std::min<Eigen::Index>(cloud.size(), cloud.dim()))
    throw ContractError("pca_project: target dimension exceeds min(N, D)");
  Eigen::BDCSVD<Matrix> svd(cloud.points, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > 1e-12 * std::max(1.0, s[0])) ++rank;
  int used = target_dim;
  if (rank < target_dim) {
    warn("pca_project: data has rank " + std::to_string(rank) + " < target dimension " +
         std::to_string(target_dim) + "; using the available components");
    used = std::max(rank, 1);
  }
  PointCloud out = cloud;
  out.points = cloud.points * svd.matrixV().leftCols(used);
  return unit_normalize(std::move(out));
}

MethodOutput run_method(const MatrixRef& raw_points, Method method, const FsascParams& params) {
  MethodOutput out;
  switch (method) {
    case Method::fsasc: {
      auto result = fsasc(raw_points, params);
      out.labels = result.labels;
      out.affinity = AffinityMatrix{result.affinity.values + result.affinity.values.transpose(),
                                    AffinityKind::filtrated};
      out.fsasc = std::move(result);
      break;
    }
    case Method::sasc_d:
    case Method::sasc_a: {
      validate(params);
      const Matrix points = unit_normalize(make_cloud(Matrix(raw_points))).points;
      const HomoPoly p = fit_vanishing(embed_data(points, params.subspaces));
      auto affinity = method == Method::sasc_d ? distance_affinity(points, p) : angle_affinity(points, p);
      out.labels = spectral_cluster(affinity.values, params.subspaces, params.seed, params.kmeans);
      out.affinity = std::move(affinity);
      break;
    }
    case Method::fasc: {
      auto result = fasc(raw_points, params.subspaces);
      out.labels = result.labels(static_cast<std::size_t>(raw_points.rows()));
      out.fasc = std::move(result);
      break;
    }
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return Rng::derive(seed, {0x747269616cULL, static_cast<std::uint64_t>(trial)});
}

TrialRecord run_trial(const ExperimentSpec& spec, int trial) {
  TrialRecord record;
  record.trial = trial;
  record.seed = trial_seed(spec.seed, trial);
  try {
    PointCloud cloud;
    if (const auto* config = std::get_if<SynthConfig>(&spec.generator)) {
      SynthConfig cfg = *config;
      cfg.seed = record.seed;
      cloud = sample_cloud(cfg).cloud;
    } else {
      cloud = load_cloud(std::get<std::filesystem::path>(spec.generator));
      if (!cloud.labels) throw ContractError("input cloud has no ground-truth labels");
      if (spec.projection_dim != 0) {
        const int dim = spec.projection_dim < 0
                            ? auto_projection_dim(cloud.size(), spec.params.subspaces, cloud.dim())
                            : spec.projection_dim;
        cloud = pca_project(cloud, dim);
      }
    }
    FsascParams params = spec.params;
    params.seed = Rng::derive(record.seed, {kKMeansStream});
    const auto output = run_method(cloud.points, spec.method, params);

    const auto& truth = *cloud.labels;
    int n = params.subspaces;
    for (int l : truth) n = std::max(n, l + 1);
    for (int l : output.labels) n = std::max(n, l + 1);
    record.metrics.error_pct = clustering_error(output.labels, truth, n);
    if (output.affinity) {
      record.metrics.intra_pct = intra_connectivity(output.affinity->values, truth);
      record.metrics.inter_pct = inter_connectivity(output.affinity->values, truth);
    }
    if (output.fsasc) {
      record.chosen_gamma = output.fsasc->chosen_gamma;
      record.eigengap = output.fsasc->eigengap;
    }
  } catch (const std::exception& e) {
    record.failed = true;
    record.failure = e.what();
  }
  return record;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  require(spec.trials >= 1, "run_experiment: trials must be >= 1");
  validate(spec.params);
  ExperimentReport report;
  report.method = spec.method;
  report.spec = spec;
  report.per_trial.resize(static_cast<std::size_t>(spec.trials));
  parallel_for(report.per_trial.size(),
               [&](std::size_t t) { report.per_trial[t] = run_trial(spec, static_cast<int>(t)); });

  std::vector<TrialMetrics> succeeded;
  for (const auto& r : report.per_trial) {
    if (r.failed)
      ++report.failures;
    else
      succeeded.push_back(r.metrics);
  }
  report.summary = summarize(succeeded);

  if (spec.output) {
    std::ofstream json(*spec.output);
    if (!json) throw ParseError("cannot write " + spec.output->string());
    json << to_json(report).dump(2) << '\n';
    auto csv_path = *spec.output;
    csv_path.replace_extension(".csv");
    std::ofstream csv(csv_path);
    if (!csv) throw ParseError("cannot write " + csv_path.string());
    csv << "trial,seed,failed,error_pct,intra_pct,inter_pct,chosen_gamma,eigengap\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : report.per_trial)
      csv << r.trial << ',' << r.seed << ',' << (r.failed ? 1 : 0) << ',' << format_double(r.metrics.error_pct)
          << ',' << opt(r.metrics.intra_pct) << ',' << opt(r.metrics.inter_pct) << ',' << opt(r.chosen_gamma)
          << ',' << opt(r.eigengap) << '\n';
  }
  return report;
}

}  // namespace fsasc
