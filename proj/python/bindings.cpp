#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bbgky/experiment.hpp"
#include "bbgky/hierarchy.hpp"

namespace py = pybind11;
using namespace bbgky;

namespace {

// Sequences cross the boundary as lists of matrices, component n at index n-1.
using MatrixList = std::vector<Matrix>;

OperatorSequence to_sequence(const MatrixList& mats, int d) {
  OperatorSequence seq(d, static_cast<int>(mats.size()));
  for (std::size_t n = 1; n <= mats.size(); ++n) seq.set(static_cast<int>(n), mats[n - 1]);
  return seq;
}

MatrixList to_list(const OperatorSequence& seq) {
  MatrixList out;
  for (int n = 1; n <= seq.n_max(); ++n) out.push_back(seq[n].matrix());
  return out;
}

py::dict row_dict(const CheckRow& r) {
  py::dict d;
  d["name"] = r.name;
  d["tag"] = r.tag;
  d["value"] = r.value;
  d["bound"] = r.bound;
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-particle BBGKY and correlation hierarchy laboratory";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def_readonly("d", &SystemConfig::d)
      .def_readonly("n_max", &SystemConfig::n_max)
      .def_readonly("hbar", &SystemConfig::hbar)
      .def_readonly("seed", &SystemConfig::seed)
      .def_readonly("times", &SystemConfig::times)
      .def_readonly("kinetic", &SystemConfig::kinetic)
      .def_readonly("potential", &SystemConfig::potential)
      .def_property_readonly("scenario", [](const SystemConfig& c) { return scenario_name(c.scenario); })
      .def("to_json", &config_to_json)
      .def("hash", &config_hash);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("scenario", &RunRecord::scenario)
      .def_readonly("config_hash", &RunRecord::config_hash)
      .def_readonly("prng", &RunRecord::prng)
      .def_readonly("wall_seconds", &RunRecord::wall_seconds)
      .def_property_readonly("rows",
                             [](const RunRecord& r) {
                               py::list rows;
                               for (const auto& row : r.rows) rows.append(row_dict(row));
                               return rows;
                             })
      .def_property_readonly("passed", &RunRecord::passed)
      .def_property_readonly("failures", &RunRecord::failures);

  m.def("parse_config", &parse_config, py::arg("json_text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("verify_suite", &verify_suite, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("run_scenario", &run_scenario, py::arg("config"), py::arg("out_dir"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "random_sequence",
      [](int d, int n_max, std::uint64_t seed, const std::string& kind) {
        return to_list(random_sequence(d, n_max, seed, parse_sequence_kind(kind)));
      },
      py::arg("d"), py::arg("n_max"), py::arg("seed"), py::arg("kind") = "bounded",
      "Components 1..n_max as complex matrices; kind is correlation, state or bounded.");
  m.def(
      "cluster_expand",
      [](const MatrixList& f, int d) { return to_list(cluster_expand(to_sequence(f, d))); },
      py::arg("components"), py::arg("d"));
  m.def(
      "cluster_invert",
      [](const MatrixList& f, int d) { return to_list(cluster_invert(to_sequence(f, d))); },
      py::arg("components"), py::arg("d"));
}
