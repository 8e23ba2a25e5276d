// fsasc: command-line front end for synthetic generation, clustering,
// benchmarking and evaluation.
//
// Exit codes: 0 success, 2 usage or parse errors, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsasc/errors.hpp"
#include "fsasc/evalmetrics.hpp"
#include "fsasc/parallel.hpp"
#include "fsasc/pipeline.hpp"
#include "fsasc/serialize.hpp"
#include "fsasc/synthgen.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string method = "fsasc";
  int subspaces = 3;
  int mu = 10;
  std::vector<double> gammas = fsasc::kDefaultGammas;
  std::uint64_t seed = 0;
  std::string out;
  unsigned workers = 0;
};

struct SynthOptions {
  int ambient_dim = 5;
  std::vector<int> dims{2, 2, 2};
  int points = 100;
  double sigma = 0.0;
};

fsasc::FsascParams make_params(const CommonOptions& o) {
  fsasc::FsascParams p;
  p.subspaces = o.subspaces;
  p.min_cluster = o.mu;
  p.gammas = o.gammas;
  p.seed = o.seed;
  return p;
}

fsasc::SynthConfig make_config(const SynthOptions& s, std::uint64_t seed) {
  return {s.ambient_dim, s.dims, s.points, s.sigma, seed};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw fsasc::ParseError("cannot write " + path);
  out << text;
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fsasc::ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    try {
      const auto doc = nlohmann::json::parse(text);
      if (doc.is_array()) return doc.get<std::vector<int>>();
      return doc.at("labels").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
      throw fsasc::ParseError(path + ": " + e.what());
    }
  }
  // CSV point cloud with a label column, or a bare column of integers.
  std::istringstream stream(text);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  bool bare = true;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.find(',') != std::string::npos) {
      bare = false;
      break;
    }
    try {
      std::size_t used = 0;
      labels.push_back(std::stoi(line, &used));
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw fsasc::ParseError(path + ": line " + std::to_string(line_no) + " is not an integer label", line_no);
    }
  }
  if (bare) return labels;
  auto cloud = fsasc::load_cloud(path);
  if (!cloud.labels) throw fsasc::ParseError(path + ": no label column");
  return *cloud.labels;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_method) {
  if (with_method)
    cmd->add_option("--method", o.method, "fsasc | sasc_d | sasc_a | fasc")
        ->check(CLI::IsMember({"fsasc", "sasc_d", "sasc_a", "fasc", "sasc-d", "sasc-a"}))
        ->capture_default_str();
  cmd->add_option("--n", o.subspaces, "number of subspaces")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--mu", o.mu, "minimum survivor count per filtration step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--gammas", o.gammas, "threshold multipliers, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
}

void add_synth(CLI::App* cmd, SynthOptions& s) {
  cmd->add_option("--D", s.ambient_dim, "ambient dimension")->capture_default_str();
  cmd->add_option("--dims", s.dims, "subspace dimensions, comma separated")->delimiter(',');
  cmd->add_option("--points", s.points, "points per subspace")->capture_default_str();
  cmd->add_option("--sigma", s.sigma, "orthogonal noise standard deviation")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtrated spectral algebraic subspace clustering"};
  app.require_subcommand(1);

  CommonOptions common;
  SynthOptions synth;

  auto* synth_cmd = app.add_subcommand("synth", "generate a labeled union-of-subspaces cloud");
  add_synth(synth_cmd, synth);
  synth_cmd->add_option("--seed", common.seed, "random seed");
  synth_cmd->add_option("--out", common.out, "output CSV (a .json sidecar with bases is written next to it)")
      ->required();

  std::string input;
  std::string dump_affinity;
  std::string pca = "none";
  auto* cluster_cmd = app.add_subcommand("cluster", "cluster one point cloud");
  add_common(cluster_cmd, common, true);
  cluster_cmd->add_option("--in", input, "input cloud (.csv or .json)")->required();
  cluster_cmd->add_option("--out", common.out, "result JSON (default: stdout)");
  cluster_cmd->add_option("--dump-affinity", dump_affinity, "write the symmetrized affinity as CSV");
  cluster_cmd->add_option("--pca", pca, "project first: none | auto | <dimension>");

  int trials = 50;
  auto* bench_cmd = app.add_subcommand("bench", "run seeded trials and report mean metrics");
  add_common(bench_cmd, common, true);
  add_synth(bench_cmd, synth);
  bench_cmd->add_option("--in", input, "use this labeled cloud instead of synthetic data");
  bench_cmd->add_option("--pca", pca, "projection for --in data: none | auto | <dimension>");
  bench_cmd->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--out", common.out, "report JSON path (per-trial CSV written alongside)");

  std::string pred_path, truth_path, affinity_path;
  auto* eval_cmd = app.add_subcommand("eval", "score predicted labels against ground truth");
  eval_cmd->add_option("--pred", pred_path, "predicted labels (.json result or label list)")->required();
  eval_cmd->add_option("--truth", truth_path, "ground-truth labels (labeled cloud or label list)")->required();
  eval_cmd->add_option("--n", common.subspaces, "number of clusters");
  eval_cmd->add_option("--affinity", affinity_path, "affinity CSV for connectivity metrics");
  eval_cmd->add_option("--out", common.out, "metrics JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  auto projection = [&](const std::string& spec) {
    if (spec == "none") return 0;
    if (spec == "auto") return -1;
    try {
      const int d = std::stoi(spec);
      if (d >= 1) return d;
    } catch (const std::exception&) {
    }
    throw fsasc::ParseError("--pca expects none, auto or a positive dimension, got '" + spec + "'");
  };

  try {
    fsasc::set_worker_count(common.workers);

    if (*synth_cmd) {
      const auto config = make_config(synth, common.seed);
      const auto labeled = fsasc::sample_cloud(config);
      std::ostringstream csv;
      fsasc::write_cloud_csv(labeled.cloud, csv);
      write_text(common.out, csv.str());
      std::filesystem::path sidecar(common.out);
      sidecar.replace_extension(".json");
      write_text(sidecar.string(), fsasc::to_json(labeled, config).dump(2) + "\n");
      return 0;
    }

    if (*cluster_cmd) {
      auto cloud = fsasc::load_cloud(input);
      const int proj = projection(pca);
      if (proj != 0)
        cloud = fsasc::pca_project(
            cloud, proj < 0 ? fsasc::auto_projection_dim(cloud.size(), common.subspaces, cloud.dim()) : proj);
      const auto method = fsasc::parse_method(common.method);
      const auto output = fsasc::run_method(cloud.points, method, make_params(common));
      nlohmann::json doc;
      if (output.fsasc) {
        doc = fsasc::to_json(*output.fsasc);
      } else {
        doc["labels"] = output.labels;
        doc["params"] = fsasc::to_json(make_params(common));
        if (output.fasc) doc["fasc"] = fsasc::to_json(*output.fasc);
      }
      doc["method"] = std::string(fsasc::to_string(method));
      if (cloud.labels) {
        int n = common.subspaces;
        for (int l : *cloud.labels) n = std::max(n, l + 1);
        doc["error_pct"] = fsasc::clustering_error(output.labels, *cloud.labels, n);
      }
      write_text(common.out, doc.dump(2) + "\n");
      if (!dump_affinity.empty()) {
        if (!output.affinity) throw fsasc::ContractError("--dump-affinity: method fasc produces no affinity");
        std::ostringstream csv;
        fsasc::write_matrix_csv(output.affinity->values, csv);
        write_text(dump_affinity, csv.str());
      }
      return 0;
    }

    if (*bench_cmd) {
      fsasc::ExperimentSpec spec;
      if (input.empty())
        spec.generator = make_config(synth, common.seed);
      else
        spec.generator = std::filesystem::path(input);
      spec.projection_dim = projection(pca);
      spec.method = fsasc::parse_method(common.method);
      spec.params = make_params(common);
      spec.trials = trials;
      spec.seed = common.seed;
      if (!common.out.empty()) spec.output = common.out;
      const auto report = fsasc::run_experiment(spec);
      if (common.out.empty()) std::cout << fsasc::to_json(report).dump(2) << '\n';
      std::cerr << "method=" << fsasc::to_string(spec.method) << " trials=" << trials
                << " mean_error_pct=" << report.summary.error_pct << " failures=" << report.failures << '\n';
      return 0;
    }

    if (*eval_cmd) {
      const auto pred = load_labels(pred_path);
      const auto truth = load_labels(truth_path);
      int n = common.subspaces;
      for (int l : pred) n = std::max(n, l + 1);
      for (int l : truth) n = std::max(n, l + 1);
      fsasc::TrialMetrics metrics;
      metrics.error_pct = fsasc::clustering_error(pred, truth, n);
      if (!affinity_path.empty()) {
        const auto w = fsasc::load_cloud(affinity_path, fsasc::CloudFormat::csv);
        metrics.intra_pct = fsasc::intra_connectivity(w.points, truth);
        metrics.inter_pct = fsasc::inter_connectivity(w.points, truth);
      }
      write_text(common.out, fsasc::to_json(metrics).dump(2) + "\n");
      return 0;
    }
  } catch (const fsasc::ParseError& e) {
    std::cerr << "fsasc: " << e.what() << '\n';
    return kExitParse;
  } catch (const fsasc::ContractError& e) {
    std::cerr << "fsasc: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "fsasc: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
