#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mgn/config.hpp"
#include "mgn/diagnostics.hpp"
#include "mgn/errors.hpp"
#include "mgn/multipliers.hpp"
#include "mgn/params.hpp"
#include "mgn/simulation.hpp"
#include "mgn/stability.hpp"

namespace py = pybind11;
using namespace mgn;

namespace {

py::array_t<double> to_array(const Field& f) {
  return py::array_t<double>(static_cast<py::ssize_t>(f.size()), f.values().data());
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

MultiplierSpec spec_from_name(const std::string& name, double delta) {
  ExperimentConfig c;
  c.multiplier = name;
  c.params.delta = delta;
  return c.multiplier_spec();
}

py::dict row_dict(const DiagnosticsRow& r) {
  py::dict d;
  d["t"] = r.t;
  d["Z"] = r.Z;
  d["V"] = r.V;
  d["I"] = r.I;
  d["H"] = r.H;
  d["M"] = r.M;
  d["C"] = r.C;
  d["hyp_margin"] = r.hyp_margin;
  d["high_band"] = r.high_band;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-layer modified Green-Naghdi solver";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<PhysParams>(m, "PhysParams")
      .def(py::init<>())
      .def_readwrite("gamma", &PhysParams::gamma)
      .def_readwrite("epsilon", &PhysParams::epsilon)
      .def_readwrite("mu", &PhysParams::mu)
      .def_readwrite("delta", &PhysParams::delta)
      .def_readwrite("inv_bond", &PhysParams::inv_bond)
      .def("validate", &PhysParams::validate)
      .def("__repr__", [](const PhysParams& p) {
        return "PhysParams(gamma=" + std::to_string(p.gamma) +
               ", epsilon=" + std::to_string(p.epsilon) + ", mu=" + std::to_string(p.mu) +
               ", delta=" + std::to_string(p.delta) + ", inv_bond=" + std::to_string(p.inv_bond) +
               ")";
      });

  py::class_<ExperimentConfig>(m, "Config")
      .def(py::init<>())
      .def_readwrite("params", &ExperimentConfig::params)
      .def_readwrite("multiplier", &ExperimentConfig::multiplier)
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("half_length", &ExperimentConfig::half_length)
      .def_readwrite("t_end", &ExperimentConfig::t_end)
      .def_readwrite("rel_tol", &ExperimentConfig::rel_tol)
      .def_readwrite("abs_tol", &ExperimentConfig::abs_tol)
      .def_readwrite("snapshot_times", &ExperimentConfig::snapshot_times)
      .def_readwrite("diag_stride", &ExperimentConfig::diag_stride)
      .def_readwrite("dealias", &ExperimentConfig::dealias)
      .def_property(
          "model", [](const ExperimentConfig& c) { return std::string(to_string(c.model)); },
          [](ExperimentConfig& c, const std::string& s) {
            if (s != "sv" && s != "gn") throw ValidationError("model", "expected gn or sv");
            c.model = s == "sv" ? ModelKind::SaintVenant : ModelKind::GreenNaghdi;
          })
      .def("validate", &ExperimentConfig::validate)
      .def("to_text", &serialize_config)
      .def_static("from_text", &parse_config)
      .def_static("load", &load_config)
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });

  m.def(
      "simulate",
      [](const ExperimentConfig& c) {
        std::vector<DiagnosticsRow> rows;
        RunObserver obs;
        obs.on_diagnostics = [&](const DiagnosticsRow& r) { rows.push_back(r); };
        RunResult r = [&] {
          py::gil_scoped_release release;
          return run_simulation(c, obs);
        }();
        const Grid grid(c.n, c.half_length);
        py::dict out;
        out["status"] = to_string(r.status);
        out["t"] = r.t;
        out["x"] = to_array(grid.nodes());
        out["zeta"] = to_array(r.state.zeta);
        out["v"] = to_array(r.state.v);
        out["w"] = to_array(r.w);
        py::list diag;
        for (const auto& row : rows) diag.append(row_dict(row));
        out["diagnostics"] = diag;
        out["steps_accepted"] = r.stats.accepted;
        out["steps_rejected"] = r.stats.rejected;
        out["message"] = r.message;
        return out;
      },
      py::arg("config"), "Runs an experiment and returns the final state and diagnostics.");

  m.def(
      "run_to_directory",
      [](const ExperimentConfig& c, const std::filesystem::path& dir, bool force) {
        py::gil_scoped_release release;
        return std::string(to_string(run_to_directory(c, dir, force).status));
      },
      py::arg("config"), py::arg("out"), py::arg("force") = false);

  m.def(
      "eval_F",
      [](const std::string& name, int layer, const std::vector<double>& k, double mu,
         double delta) {
        const MultiplierSpec spec = spec_from_name(name, delta);
        const Layer l = layer == 1 ? Layer::Upper : Layer::Lower;
        std::vector<double> out(k.size());
        for (std::size_t i = 0; i < k.size(); ++i) out[i] = eval_F(spec, l, k[i], mu, delta);
        return to_array(out);
      },
      py::arg("multiplier"), py::arg("layer"), py::arg("k"), py::arg("mu") = 0.1,
      py::arg("delta") = 0.5, "F_i(sqrt(mu) k) for 'id', 'reg', 'imp' or 'custom:<path>'.");

  m.def(
      "threshold_curve",
      [](const std::string& name, const std::vector<double>& k, const PhysParams& p) {
        const auto curve = name == "euler" ? euler_threshold_curve(k, p)
                                           : threshold_curve(k, p, spec_from_name(name, p.delta));
        return to_array(curve.threshold);
      },
      py::arg("multiplier"), py::arg("k"), py::arg("params") = PhysParams{},
      "eps^2 |wbar|^2 at which the mode k turns unstable; NaN when it never does.");

  m.def(
      "growth_rate",
      [](const std::string& name, double k, const PhysParams& p, double wbar) {
        return growth_rate(k, p, spec_from_name(name, p.delta), wbar);
      },
      py::arg("multiplier"), py::arg("k"), py::arg("params"), py::arg("wbar"));

  m.def(
      "admissibility",
      [](const std::string& name, int layer, double mu, double delta, double k_max,
         std::size_t samples) {
        const MultiplierSpec spec = spec_from_name(name, delta);
        const Layer l = layer == 1 ? Layer::Upper : Layer::Lower;
        const auto r = check_admissibility(spec, l, mu, delta, k_max, samples);
        py::dict d;
        d["admissible"] = r.admissible();
        d["worst_violation"] = r.worst_violation;
        d["pairs_checked"] = r.pairs_checked;
        d["sigma"] = r.sigma;
        d["K_F"] = r.k_F;
        d["report"] = format_report(r, spec, l);
        return d;
      },
      py::arg("multiplier"), py::arg("layer") = 1, py::arg("mu") = 0.1, py::arg("delta") = 0.5,
      py::arg("k_max") = 100.0, py::arg("samples") = 100);

  m.def("upsilon_F", &upsilon_F, py::arg("params"), py::arg("kf1"), py::arg("kf2"),
        py::arg("sigma"));
}
