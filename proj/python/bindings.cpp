#include <fsasc/affinity.hpp>
#include <fsasc/errors.hpp>
#include <fsasc/evalmetrics.hpp>
#include <fsasc/filtration.hpp>
#include <fsasc/parallel.hpp>
#include <fsasc/pipeline.hpp>
#include <fsasc/serialize.hpp>
#include <fsasc/synthgen.hpp>
#include <fsasc/tensor_poly.hpp>
#include <fsasc/vanish.hpp>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace fsasc;

namespace {

// Parameters arrive as keyword arguments with the same names as FsascParams.
FsascParams make_params(int subspaces, int min_cluster, std::optional<std::vector<double>> gammas,
                        std::uint64_t seed) {
  FsascParams p;
  p.subspaces = subspaces;
  p.min_cluster = min_cluster;
  if (gammas) p.gammas = *gammas;
  p.seed = seed;
  validate(p);
  return p;
}

py::dict as_dict(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump()).cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_fsasc, m) {
  m.doc() = "Filtrated spectral algebraic subspace clustering";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_OverflowError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("monomial_count", &monomial_count, py::arg("ambient_dim"), py::arg("degree"));
  m.def("set_worker_count", &set_worker_count, py::arg("workers"));

  py::class_<HomoPoly>(m, "HomoPoly")
      .def(py::init([](int d, int n, const Vector& c) { return HomoPoly(MonomialBasis::get(d, n), c); }),
           py::arg("ambient_dim"), py::arg("degree"), py::arg("coeffs"))
      .def_property_readonly("ambient_dim", &HomoPoly::ambient_dim)
      .def_property_readonly("degree", &HomoPoly::degree)
      .def_property_readonly("coeffs", &HomoPoly::coeffs)
      .def("__call__", [](const HomoPoly& p, const Vector& x) { return p.eval(x); })
      .def("gradient", [](const HomoPoly& p, const Vector& x) { return p.gradient(x); })
      .def("gradients", [](const HomoPoly& p, const Matrix& x) { return p.gradients(x); })
      .def("to_json", [](const HomoPoly& p) { return as_dict(to_json(p)); });

  m.def("exponents", [](int d, int n) {
    const auto basis = MonomialBasis::get(d, n);
    std::vector<std::vector<int>> out;
    for (std::size_t k = 0; k < basis->size(); ++k) {
      const auto e = basis->exponent(k);
      out.emplace_back(e.begin(), e.end());
    }
    return out;
  }, py::arg("ambient_dim"), py::arg("degree"));
  m.def("veronese", [](const Matrix& points, int degree) { return embed_data(points, degree).matrix; },
        py::arg("points"), py::arg("degree"));
  m.def("fit_vanishing", [](const Matrix& points, int degree, std::optional<Vector> reference) {
    const auto data = embed_data(points, degree);
    if (reference) return fit_vanishing(data, VectorRef(*reference));
    return fit_vanishing(data);
  }, py::arg("points"), py::arg("degree"), py::arg("reference") = py::none());
  m.def("beta_statistic", [](const Matrix& points, const HomoPoly& p) { return beta_statistic(points, p); });
  m.def("angle_affinity", [](const Matrix& points, const HomoPoly& p) { return angle_affinity(points, p).values; });
  m.def("distance_affinity", [](const Matrix& points, const HomoPoly& p) { return distance_affinity(points, p).values; });

  m.def("sample_cloud", [](int ambient_dim, std::vector<int> dims, int per, double sigma, std::uint64_t seed) {
    const auto c = sample_cloud(SynthConfig{ambient_dim, std::move(dims), per, sigma, seed});
    return py::make_tuple(c.cloud.points, *c.cloud.labels, c.bases);
  }, py::arg("ambient_dim"), py::arg("dims"), py::arg("points_per_subspace") = 100,
     py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);

  m.def("cluster", [](const Matrix& points, const std::string& method, int subspaces, int min_cluster,
                      std::optional<std::vector<double>> gammas, std::uint64_t seed) {
    const auto params = make_params(subspaces, min_cluster, gammas, seed);
    MethodOutput out;
    {
      py::gil_scoped_release release;
      out = run_method(points, parse_method(method), params);
    }
    py::dict result;
    result["labels"] = out.labels;
    if (out.affinity) result["affinity"] = out.affinity->values;
    if (out.fsasc) {
      result["dimensions"] = out.fsasc->dimensions;
      result["depths"] = out.fsasc->depths;
      result["chosen_gamma"] = out.fsasc->chosen_gamma;
      result["eigengap"] = out.fsasc->eigengap;
      result["beta"] = out.fsasc->beta;
    }
    if (out.fasc) {
      std::vector<int> dims;
      for (const auto& c : out.fasc->clusters) dims.push_back(c.dimension);
      result["dimensions"] = dims;
      result["depths"] = out.fasc->depths;
    }
    return result;
  }, py::arg("points"), py::arg("method") = "fsasc", py::arg("subspaces") = 2, py::arg("min_cluster") = 10,
     py::arg("gammas") = py::none(), py::arg("seed") = 0);

  m.def("clustering_error", &clustering_error, py::arg("predicted"), py::arg("truth"), py::arg("subspaces"));
  m.def("intra_connectivity", [](const Matrix& w, const std::vector<int>& truth) { return intra_connectivity(w, truth); });
  m.def("inter_connectivity", [](const Matrix& w, const std::vector<int>& truth) { return inter_connectivity(w, truth); });

  m.def("run_experiment", [](int ambient_dim, std::vector<int> dims, const std::string& method, int trials,
                             int per, double sigma, std::uint64_t seed, int min_cluster) {
    ExperimentSpec spec;
    spec.generator = SynthConfig{ambient_dim, dims, per, sigma, seed};
    spec.method = parse_method(method);
    spec.params = make_params(static_cast<int>(dims.size()), min_cluster, std::nullopt, seed);
    spec.trials = trials;
    spec.seed = seed;
    ExperimentReport report;
    {
      py::gil_scoped_release release;
      report = run_experiment(spec);
    }
    return as_dict(to_json(report));
  }, py::arg("ambient_dim"), py::arg("dims"), py::arg("method") = "fsasc", py::arg("trials") = 10,
     py::arg("points_per_subspace") = 100, py::arg("noise_sigma") = 0.0, py::arg("seed") = 0,
     py::arg("min_cluster") = 10);
}
