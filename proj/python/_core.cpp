#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "xfpt/commands.hpp"
#include "xfpt/errors.hpp"
#include "xfpt/extremes.hpp"
#include "xfpt/model.hpp"
#include "xfpt/pde.hpp"
#include "xfpt/regimes.hpp"
#include "xfpt/spectral.hpp"

namespace py = pybind11;
using namespace xfpt;

namespace {

InitialCondition initial_from(const std::string& name) {
  if (name == "outer") return DeltaAtOuter{};
  if (name == "uniform") return Uniform{};
  if (name == "quasi_stationary") return QuasiStationary{};
  if (name == "center") return DeltaAtCenter{};
  throw py::value_error("unknown initial condition '" + name + "'");
}

GridSpec grid_of(int num_cells) {
  GridSpec g;
  g.num_cells = num_cells;
  return g;
}

TimeSpec time_of(std::optional<double> dt_initial, std::optional<double> t_final) {
  TimeSpec t;
  t.dt_initial = dt_initial;
  t.t_final = t_final;
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extreme first-passage times of diffusive searchers.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);

  py::class_<AnnulusModel>(m, "AnnulusModel")
      .def(py::init([](int dim, double sigma, double kappa, const std::string& initial, double t_diff) {
             AnnulusModel a{dim, sigma, kappa, initial_from(initial), t_diff};
             a.validate();
             return a;
           }),
           py::arg("dim") = 3, py::arg("sigma") = 0.1, py::arg("kappa") = kInfiniteReactivity,
           py::arg("initial") = "outer", py::arg("t_diff") = 1.0)
      .def_readonly("dim", &AnnulusModel::dim)
      .def_readonly("sigma", &AnnulusModel::sigma)
      .def_readonly("kappa", &AnnulusModel::kappa)
      .def_readonly("t_diff", &AnnulusModel::t_diff)
      .def_property_readonly("initial", [](const AnnulusModel& a) { return initial_condition_name(a.initial); })
      .def("__repr__", [](const AnnulusModel& a) { return to_json(a); });

  py::class_<OUWellModel>(m, "OUWellModel")
      .def(py::init([](int dim, double eps, const std::string& initial, double t_diff) {
             OUWellModel o{dim, eps, t_diff, initial_from(initial)};
             o.validate();
             return o;
           }),
           py::arg("dim") = 1, py::arg("eps") = 0.1, py::arg("initial") = "center", py::arg("t_diff") = 1.0)
      .def_readonly("dim", &OUWellModel::dim)
      .def_readonly("eps", &OUWellModel::eps)
      .def("__repr__", [](const OUWellModel& o) { return to_json(o); });

  py::class_<ShortTimeAsymptotics>(m, "ShortTimeAsymptotics")
      .def_readonly("amp", &ShortTimeAsymptotics::amp)
      .def_readonly("power", &ShortTimeAsymptotics::power)
      .def_readonly("gap", &ShortTimeAsymptotics::gap);

  py::class_<SurvivalCurve>(m, "SurvivalCurve")
      .def_readonly("times", &SurvivalCurve::times)
      .def_readonly("values", &SurvivalCurve::values)
      .def_readonly("absorbed", &SurvivalCurve::absorbed)
      .def("to_csv", &SurvivalCurve::to_csv)
      .def("__len__", &SurvivalCurve::size);

  py::class_<Thresholds>(m, "Thresholds")
      .def_readonly("n_exp", &Thresholds::n_exp)
      .def_readonly("n_gum", &Thresholds::n_gum)
      .def_readonly("n_wei", &Thresholds::n_wei);

  m.def(
      "solve_survival",
      [](const RadialModel& model, int num_cells, std::optional<double> dt_initial, std::optional<double> t_final) {
        py::gil_scoped_release release;
        return solve_survival(model, grid_of(num_cells), time_of(dt_initial, t_final));
      },
      py::arg("model"), py::arg("num_cells") = GridSpec{}.num_cells, py::arg("dt_initial") = py::none(),
      py::arg("t_final") = py::none());
  m.def("mean_fpt", [](const SurvivalCurve& c) { return mean_fpt(c).value; });
  m.def(
      "mean_kth_fastest", [](const SurvivalCurve& c, long long n, long long k) { return mean_kth_fastest(c, n, k).value; },
      py::arg("curve"), py::arg("n"), py::arg("k") = 1);
  m.def(
      "eigenvalues",
      [](const RadialModel& model, int n_max, int num_cells) {
        return eigenpairs(model, n_max, grid_of(num_cells)).eigenvalues;
      },
      py::arg("model"), py::arg("n_max") = 8, py::arg("num_cells") = GridSpec{}.num_cells);

  m.def("short_time_coefficients", &short_time_coefficients);
  m.def("mfpt_asymptotic", py::overload_cast<const AnnulusModel&>(&mfpt_asymptotic));
  m.def(
      "large_n_mean",
      [](const ShortTimeAsymptotics& st, long long n, long long k) {
        return large_n_moment(st, {n, k, std::nullopt});
      },
      py::arg("st"), py::arg("n"), py::arg("k") = 1);
  m.def("n_thresholds", &n_thresholds, py::arg("model"), py::arg("theta") = 0.5);
  m.def(
      "classify",
      [](const AnnulusModel& model, long long n, double theta) { return label_name(classify(model, n, theta).label); },
      py::arg("model"), py::arg("n"), py::arg("theta") = 0.5);
  m.def("max_approximation", &max_approximation, py::arg("n"), py::arg("mfpt"), py::arg("t_diff") = 1.0);

  m.def("figure_ids", &figure_ids);
  m.def(
      "build_figure",
      [](const std::string& id, int num_cells) {
        RunConfig base;
        base.grid.num_cells = num_cells;
        FigureBundle b;
        {
          py::gil_scoped_release release;
          b = build_figure(id, base);
        }
        return py::make_tuple(b.manifest, b.files);
      },
      py::arg("id"), py::arg("num_cells") = GridSpec{}.num_cells,
      "Returns (manifest entries, {file name: CSV text}) for one figure.");
}
