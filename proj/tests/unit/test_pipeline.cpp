#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fsasc/pipeline.hpp>
#include <fsasc/serialize.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace fsasc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fsasc_test_pipeline";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

FsascParams three() {
  FsascParams p;
  p.subspaces = 3;
  return p;
}

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("fsasc") == Method::fsasc);
  CHECK(parse_method("sasc-d") == Method::sasc_d);
  CHECK(parse_method("sasc_a") == Method::sasc_a);
  CHECK(parse_method("fasc") == Method::fasc);
  CHECK(to_string(Method::sasc_d) == "sasc_d");
  CHECK_THROWS_AS(parse_method("kmeans"), ContractError);
}

TEST_CASE("CSV parsing") {
  std::istringstream plain("1,0\n0,1\n");
  const auto c = parse_cloud_csv(plain);
  CHECK(c.size() == 2);
  CHECK(c.dim() == 2);
  CHECK_FALSE(c.labels.has_value());

  std::istringstream labeled("x1,x2,x3,label\n1,2,3,0\n\n4,5,6,1\n");
  const auto l = parse_cloud_csv(labeled);
  CHECK(l.dim() == 3);
  REQUIRE(l.labels);
  CHECK(*l.labels == std::vector<int>{0, 1});
  CHECK(l.points(1, 2) == 6.0);

  std::istringstream ragged("1,2,3\n4,5,6\n7,8\n");
  try {
    parse_cloud_csv(ragged);
    FAIL("ragged rows must not parse");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream bad_number("1,2\n3,abc\n");
  CHECK_THROWS_AS(parse_cloud_csv(bad_number), ParseError);
  std::istringstream bad_label("a,b,label\n1,2,0.5\n");
  CHECK_THROWS_AS(parse_cloud_csv(bad_label), ParseError);
  std::istringstream empty("x,y\n");
  CHECK_THROWS_AS(parse_cloud_csv(empty), ParseError);
  std::istringstream one_column("1\n2\n");
  CHECK_THROWS_AS(parse_cloud_csv(one_column), ParseError);
}

TEST_CASE("JSON parsing") {
  const auto c = parse_cloud_json(R"({"points": [[1, 0], [0, 1]], "labels": [1, 0]})");
  CHECK(c.size() == 2);
  CHECK(*c.labels == std::vector<int>{1, 0});
  CHECK_THROWS_AS(parse_cloud_json("{"), ParseError);
  CHECK_THROWS_AS(parse_cloud_json(R"({"pts": []})"), ParseError);
  CHECK_THROWS_AS(parse_cloud_json(R"({"points": [[1, 0], [0]]})"), ParseError);
  CHECK_THROWS_AS(parse_cloud_json(R"({"points": [[1, "a"]]})"), ParseError);
  CHECK_THROWS_AS(parse_cloud_json(R"({"points": [[1, 0]], "labels": ["x"]})"), ParseError);
  CHECK_THROWS_AS(parse_cloud_json(R"({"points": [[1, 0]], "labels": [0, 1]})"), ContractError);
}

TEST_CASE("file round trips are exact") {
  const auto cloud = sample_cloud(SynthConfig{5, {1, 2, 3}, 20, 0.05, 3}).cloud;

  const auto json_path = scratch("cloud.json");
  spit(json_path, cloud_to_json(cloud));
  const auto from_json = load_cloud(json_path);
  CHECK((from_json.points - cloud.points).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(*from_json.labels == *cloud.labels);

  const auto csv_path = scratch("cloud.csv");
  {
    std::ofstream out(csv_path);
    write_cloud_csv(cloud, out);
  }
  const auto from_csv = load_cloud(csv_path);
  CHECK((from_csv.points - cloud.points).norm() == 0.0);
  CHECK(*from_csv.labels == *cloud.labels);
  CHECK(slurp(csv_path).rfind("x1,x2,x3,x4,x5,label\n", 0) == 0);

  const auto forced = load_cloud(json_path, CloudFormat::json);
  CHECK(forced.size() == cloud.size());
  CHECK_THROWS_AS(load_cloud(scratch("missing.csv")), ParseError);
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  std::ostringstream out;
  Matrix m(2, 2);
  m << 1, 0.5, 1.0 / 3.0, 0;
  write_matrix_csv(m, out);
  CHECK(out.str() == "1,0.5\n0.33333333333333331,0\n");
}

TEST_CASE("automatic projection dimension") {
  CHECK(auto_projection_dim(300, 3, 60) == 8);
  CHECK(auto_projection_dim(100, 3, 60) == 7);
  CHECK(auto_projection_dim(100, 3, 5) == 5);
  for (int n = 1; n <= 4; ++n)
    for (int count = 4; count <= 400; count += 13) {
      if (monomial_count(2, n) > static_cast<std::uint64_t>(count)) {
        CHECK_THROWS_AS(auto_projection_dim(count, n, 80), ContractError);
        continue;
      }
      const int d = auto_projection_dim(count, n, 80);
      CHECK(d >= 2);
      CHECK(d <= 8);
      CHECK(monomial_count(d, n) <= static_cast<std::uint64_t>(count));
      if (d < 8) CHECK(monomial_count(d + 1, n) > static_cast<std::uint64_t>(count));
    }
}

TEST_CASE("PCA projection") {
  // Points spanning a 3-dimensional subspace of R^7: projecting to 3 keeps inner products.
  Rng rng(4);
  const Matrix basis = test::random_orthogonal(rng, 7).leftCols(3);
  Matrix pts(40, 7);
  for (int r = 0; r < 40; ++r) pts.row(r) = (basis * test::unit_vector(rng, 3)).transpose();
  const auto projected = pca_project(make_cloud(pts, std::vector<int>(40, 0)), 3);
  CHECK(projected.dim() == 3);
  CHECK(projected.unit_normalized);
  CHECK(projected.labels->size() == 40);
  const Matrix gram = pts * pts.transpose();
  const Matrix gram_p = projected.points * projected.points.transpose();
  CHECK((gram - gram_p).cwiseAbs().maxCoeff() <= 1e-10);

  test::WarningCapture capture;
  const auto deficient = pca_project(make_cloud(pts), 5);
  CHECK(capture.messages.size() == 1);
  CHECK(deficient.dim() == 3);
  CHECK_THROWS_AS(pca_project(make_cloud(pts), 0), ContractError);
}

TEST_CASE("every method runs") {
  const auto cloud = sample_cloud(SynthConfig{5, {2, 3, 4}, 100, 0.0, 1});
  for (Method m : {Method::fsasc, Method::sasc_d, Method::sasc_a, Method::fasc}) {
    const auto out = run_method(cloud.cloud.points, m, three());
    CHECK(out.labels.size() == 300);
    if (m == Method::fasc) {
      CHECK_FALSE(out.affinity.has_value());
      CHECK(out.fasc.has_value());
    } else {
      REQUIRE(out.affinity.has_value());
      CHECK((out.affinity->values - out.affinity->values.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    }
    if (m != Method::sasc_a) CHECK(clustering_error(out.labels, *cloud.cloud.labels, 3) == 0.0);
  }
}

TEST_CASE("experiments are deterministic and reports are byte-identical") {
  ExperimentSpec spec;
  spec.generator = SynthConfig{5, {1, 2, 3}, 40, 0.03, 0};
  spec.method = Method::fsasc;
  spec.params = three();
  spec.params.gammas = {0.1, 1.0};
  spec.trials = 3;
  spec.seed = 17;
  spec.output = scratch("report_a.json");
  const auto a = run_experiment(spec);
  spec.output = scratch("report_b.json");
  const auto b = run_experiment(spec);
  CHECK(slurp(scratch("report_a.json")) == slurp(scratch("report_b.json")));
  CHECK(a.summary.error_pct == b.summary.error_pct);
  CHECK(a.failures == 0);
  REQUIRE(a.per_trial.size() == 3);
  CHECK(a.per_trial[0].seed == trial_seed(17, 0));
  CHECK(a.per_trial[0].seed != a.per_trial[1].seed);
  CHECK(a.per_trial[1].chosen_gamma.has_value());

  const auto doc = nlohmann::json::parse(slurp(scratch("report_a.json")));
  for (const char* key : {"method", "params", "trials", "mean_error_pct", "intra_pct", "inter_pct", "failures", "per_trial"})
    CHECK(doc.contains(key));
  CHECK(doc["method"] == "fsasc");
  CHECK(doc["per_trial"].size() == 3);
  CHECK(doc["per_trial"][0].contains("chosen_gamma"));
  const std::string csv = slurp(scratch("report_a.csv"));
  CHECK(csv.rfind("trial,seed,failed,error_pct,intra_pct,inter_pct,chosen_gamma,eigengap\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  // A single trial run twice.
  spec.trials = 1;
  spec.output.reset();
  CHECK(to_json(run_experiment(spec)).dump() == to_json(run_experiment(spec)).dump());
}

TEST_CASE("SASC-A on noiseless (2,2,2) errs around a third of the time") {
  ExperimentSpec spec;
  spec.generator = SynthConfig{5, {2, 2, 2}, 100, 0.0, 0};
  spec.method = Method::sasc_a;
  spec.params = three();
  spec.trials = 100;
  spec.seed = 3;
  const auto report = run_experiment(spec);
  CHECK(std::abs(report.summary.error_pct - 34.2) <= 5.0);
}

TEST_CASE("failed trials are recorded, not thrown") {
  ExperimentSpec spec;
  // 12 points cannot support 35 cubic monomials.
  spec.generator = SynthConfig{5, {2, 2, 2}, 4, 0.0, 0};
  spec.params = three();
  spec.trials = 2;
  const auto report = run_experiment(spec);
  CHECK(report.failures == 2);
  CHECK(report.per_trial[0].failed);
  CHECK(report.per_trial[0].failure.find("not enough points") != std::string::npos);
  CHECK(to_json(report)["failures"] == 2);

  spec.trials = 0;
  CHECK_THROWS_AS(run_experiment(spec), ContractError);
}

TEST_CASE("experiments on labeled files with projection") {
  // Three 3-planes in R^12 with 40 points each; auto projection picks D' = 7.
  SynthConfig cfg{12, {3, 3, 3}, 40, 0.0, 5};
  const auto cloud = sample_cloud(cfg).cloud;
  const auto path = scratch("lines.csv");
  {
    std::ofstream out(path);
    write_cloud_csv(cloud, out);
  }
  ExperimentSpec spec;
  spec.generator = path;
  spec.method = Method::sasc_d;
  spec.params = three();
  spec.trials = 1;
  spec.projection_dim = -1;
  const auto report = run_experiment(spec);
  CHECK(report.failures == 0);
  CHECK(report.summary.error_pct == 0.0);

  const auto unlabeled = scratch("unlabeled.csv");
  spit(unlabeled, "1,0\n0,1\n");
  spec.generator = unlabeled;
  CHECK(run_experiment(spec).failures == 1);
}

TEST_CASE("params JSON round trip") {
  FsascParams p = three();
  p.min_cluster = 7;
  p.gammas = {0.5, 2.0};
  p.seed = 99;
  const auto q = fsasc_params_from_json(nlohmann::json::parse(to_json(p).dump()));
  CHECK(q.subspaces == 3);
  CHECK(q.min_cluster == 7);
  CHECK(q.gammas == p.gammas);
  CHECK(q.seed == 99);
}
