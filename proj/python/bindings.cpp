#include <algorithm>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fddmoea/benchmarks.hpp"
#include "fddmoea/federation.hpp"
#include "fddmoea/harness.hpp"
#include "fddmoea/metrics.hpp"
#include "fddmoea/moea.hpp"
#include "fddmoea/sampling.hpp"
#include "fddmoea/surrogate.hpp"

namespace py = pybind11;
using namespace fddmoea;

namespace {

ExperimentConfig config_from(const py::dict& options) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : options) {
    std::string k = py::str(key);
    std::replace(k.begin(), k.end(), '_', '-');
    cfg.set(k, std::string(py::str(value)));
  }
  return cfg;
}

py::dict experiment_dict(const ExperimentResult& result) {
  py::dict out;
  out["mean_igd"] = result.mean_igd;
  out["std_igd"] = result.std_igd;
  py::list finals, fes;
  for (const auto& r : result.runs) {
    finals.append(r.final_igd());
    fes.append(r.final_fes());
  }
  out["final_igd"] = finals;
  out["final_fes"] = fes;
  py::list records;
  for (const auto& rec : result.records()) records.append(py::make_tuple(rec.run, rec.iter, rec.fes, rec.igd, rec.ms));
  out["records"] = records;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Federated data-driven multi-objective optimization core";

  py::class_<Problem>(m, "Problem")
      .def(py::init([](const std::string& family, std::size_t objectives, std::size_t dims, double alpha) {
             return Problem(parse_family(family), objectives, dims, alpha);
           }),
           py::arg("family"), py::arg("objectives"), py::arg("dims"), py::arg("dtlz4_alpha") = 100.0)
      .def_property_readonly("objectives", &Problem::objectives)
      .def_property_readonly("dims", &Problem::dims)
      .def("evaluate", [](const Problem& p, const Vector& x) { return p.evaluate(x); }, py::arg("x"))
      .def("sample_pareto_front", &Problem::sample_pareto_front, py::arg("n"));

  m.def(
      "latin_hypercube",
      [](std::size_t n, std::size_t d, std::uint64_t seed) {
        auto rng = make_rng(seed);
        return latin_hypercube(n, d, rng).to_rows();
      },
      py::arg("n"), py::arg("d"), py::arg("seed") = 0);

  py::class_<RbfnModel>(m, "RbfnModel")
      .def_property_readonly("centers", [](const RbfnModel& r) { return r.centers.to_rows(); })
      .def_property_readonly("spreads", [](const RbfnModel& r) { return r.spreads; })
      .def_property_readonly("weights", [](const RbfnModel& r) { return r.weights.to_rows(); })
      .def_property_readonly("biases", [](const RbfnModel& r) { return r.biases; })
      .def("predict", [](const RbfnModel& r, const Vector& x) { return predict(r, x); }, py::arg("x"))
      .def("to_json", &model_to_json)
      .def_static("from_json", [](const std::string& s) { return model_from_json(s); })
      .def(py::self == py::self);

  m.def(
      "fit_local",
      [](const std::vector<Vector>& x, const std::vector<Vector>& y, std::size_t q, std::size_t epochs,
         double learning_rate, std::size_t batch_size, const std::string& kernel, std::uint64_t seed) {
        if (x.size() != y.size()) throw std::invalid_argument("fit_local: x and y differ in length");
        Dataset data{Matrix::from_rows(x), Matrix::from_rows(y)};
        TrainingConfig cfg{epochs, learning_rate, batch_size, parse_kernel(kernel)};
        auto rng = make_rng(seed);
        return fit_local(data, q, cfg, rng);
      },
      py::arg("x"), py::arg("y"), py::arg("q"), py::arg("epochs") = 20, py::arg("learning_rate") = 0.06,
      py::arg("batch_size") = 1, py::arg("kernel") = "squared", py::arg("seed") = 0);

  m.def(
      "sorted_average",
      [](const std::vector<std::pair<RbfnModel, double>>& models) {
        std::vector<WeightedModel> wm;
        for (const auto& [model, weight] : models) wm.push_back({model, weight});
        return sorted_average(wm);
      },
      py::arg("models"));

  m.def("igd", &igd, py::arg("solutions"), py::arg("reference"));
  m.def("nondominated_filter", &nondominated_filter, py::arg("points"));
  m.def("fast_nondominated_sort", &fast_nondominated_sort, py::arg("points"));

  m.def(
      "run_experiment",
      [](const py::dict& options, std::size_t workers) {
        const auto cfg = config_from(options);
        RunOptions opts;
        opts.workers = workers;
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(cfg, opts);
        }
        return experiment_dict(result);
      },
      py::arg("options") = py::dict(), py::arg("workers") = 1,
      "Runs an experiment. Option names follow the CLI flags, with '_' or '-'.");
}
