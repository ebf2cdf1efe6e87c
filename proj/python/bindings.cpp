#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "fdg/dg_core.hpp"
#include "fdg/harness.hpp"
#include "fdg/soe_kernel.hpp"
#include "fdg/time_mesh.hpp"

namespace py = pybind11;
using namespace fdg;

namespace {

// Tables and configs cross the boundary as plain dicts through their JSON form.
py::object from_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::string to_json(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  return py::module_::import("json").attr("dumps")(obj).cast<std::string>();
}

template <class F>
auto without_gil(F f) {
  py::gil_scoped_release release;
  return f();
}

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict solve_example(const std::string& example, double alpha, int p, std::optional<double> r, std::size_t N,
                       std::optional<double> h, const std::string& mode, std::optional<double> eps, double T) {
  RunConfig cfg;
  cfg.example = parse_example(example);
  cfg.alpha = alpha;
  cfg.p = p;
  cfg.r = r;
  cfg.N_list = {N};
  if (h) cfg.h_list = {*h};
  cfg.mode = parse_mode(mode);
  cfg.eps = eps;
  cfg.T = T;
  cfg.validate();

  const auto problem = make_problem(cfg.example, alpha, h);
  const GradedMesh mesh(T, N, cfg.grading());
  std::optional<SoeKernel> kernel;
  if (cfg.mode == Mode::fast) kernel = build_dg_kernel(mesh, alpha, eps.value_or(default_soe_eps(mesh, alpha)));
  const auto trace = without_gil([&] { return solve(cfg.mode, problem.system, mesh, alpha, p, kernel); });

  const std::size_t M = problem.system.dofs;
  py::array_t<double> values({static_cast<py::ssize_t>(N + 1), static_cast<py::ssize_t>(M)});
  auto v = values.mutable_unchecked<2>();
  for (std::size_t i = 0; i < M; ++i) v(0, i) = trace.initial()[i];
  for (std::size_t n = 1; n <= N; ++n) {
    const auto left = trace.left_limit(n);
    for (std::size_t i = 0; i < M; ++i) v(n, i) = left[i];
  }
  py::dict out;
  out["times"] = to_array(mesh.points());
  out["values"] = values;
  out["error"] = average_error(trace, problem.system);
  out["r"] = mesh.grading();
  if (kernel) out["Q"] = kernel->size();
  if (problem.grid) out["nodes"] = to_array(problem.grid->nodes);
  return out;
}

}  // namespace

PYBIND11_MODULE(fdg, m) {
  m.doc() = "Fast DG time stepping for time-fractional subdiffusion";

  m.def("optimal_r", &optimal_r, py::arg("alpha"), py::arg("sigma"), py::arg("p"));
  m.def(
      "mesh_points",
      [](double T, std::size_t N, double r) { return to_array(GradedMesh(T, N, r).points()); }, py::arg("T"),
      py::arg("N"), py::arg("r"));

  py::class_<SoeKernel>(m, "SoeKernel")
      .def_readonly("beta", &SoeKernel::beta)
      .def_readonly("q", &SoeKernel::q)
      .def_readonly("eps", &SoeKernel::eps)
      .def_readonly("delta", &SoeKernel::delta)
      .def_readonly("horizon", &SoeKernel::horizon)
      .def_property_readonly("nodes", [](const SoeKernel& k) { return to_array(k.nodes); })
      .def_property_readonly("weights", [](const SoeKernel& k) { return to_array(k.weights); })
      .def("__len__", &SoeKernel::size)
      .def("__call__", &SoeKernel::evaluate, py::arg("t"))
      .def("validate", &validate_soe, py::arg("samples") = kCertificationSamples)
      .def("to_json", &soe_to_json)
      .def_static("from_json", &soe_from_json, py::arg("text"));
  m.def("build_soe", &build_soe, py::arg("beta"), py::arg("eps"), py::arg("delta"), py::arg("horizon"));
  m.def("build_soe_shifted", &build_soe_shifted, py::arg("beta"), py::arg("beta0"), py::arg("eps"), py::arg("delta"),
        py::arg("horizon"));

  m.def("solve", &solve_example, py::arg("example") = "ode1", py::arg("alpha") = 0.5, py::arg("p") = 1,
        py::arg("r") = py::none(), py::arg("N") = 64, py::arg("h") = py::none(), py::arg("mode") = "direct",
        py::arg("eps") = py::none(), py::arg("T") = 4.0,
        "Solve one manufactured example; returns times, left-limit values and the average error.");

  m.def(
      "caputo_residual",
      [](const std::string& example, double alpha, std::optional<double> h, double T) {
        return caputo_residual(make_problem(parse_example(example), alpha, h), T);
      },
      py::arg("example"), py::arg("alpha"), py::arg("h") = py::none(), py::arg("T") = 4.0);

  m.def(
      "table_preset",
      [](const std::string& name) {
        py::list out;
        for (const auto& c : table_preset(name)) out.append(from_json(run_config_to_json(c)));
        return out;
      },
      py::arg("name"));
  m.def(
      "reference_table", [](const std::string& name) { return from_json(format_table(reference_table(name), Format::json)); },
      py::arg("name"));
  m.def(
      "run_convergence",
      [](const py::object& config) {
        const auto cfg = run_config_from_json(to_json(config));
        const auto table = without_gil([&] { return run_convergence(cfg); });
        return from_json(format_table(table, Format::json));
      },
      py::arg("config"), "Run a RunConfig given as a dict or JSON string; returns the error table as a dict.");
  m.def(
      "run_table",
      [](const std::string& name) {
        const auto configs = table_preset(name);
        const auto table = without_gil([&] { return run_configs(configs); });
        return from_json(format_table(table, Format::json));
      },
      py::arg("name"));
  m.def(
      "check_against_reference",
      [](const py::object& computed, const py::object& reference, double rel_tol, double rate_tol) {
        const auto c = check_against_reference(table_from_json(to_json(computed)), table_from_json(to_json(reference)),
                                               rel_tol, rate_tol);
        py::dict out;
        out["ok"] = c.ok();
        out["compared"] = c.compared;
        out["worst_error_rel"] = c.worst_error_rel;
        out["worst_rate_diff"] = c.worst_rate_diff;
        out["violations"] = c.violations;
        return out;
      },
      py::arg("computed"), py::arg("reference"), py::arg("rel_tol") = 0.05, py::arg("rate_tol") = 0.1);
  m.def(
      "format_table",
      [](const py::object& table, const std::string& format) {
        return format_table(table_from_json(to_json(table)), parse_format(format));
      },
      py::arg("table"), py::arg("format") = "markdown");
  m.def(
      "bench",
      [](const py::object& config, int repeats) {
        const auto cfg = run_config_from_json(to_json(config));
        const auto report = without_gil([&] { return bench_fast_vs_direct(cfg, repeats); });
        return from_json(format_bench(report, Format::json));
      },
      py::arg("config"), py::arg("repeats") = 3);
}
