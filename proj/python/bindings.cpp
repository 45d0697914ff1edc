// Python module: configs, run drivers, the vacuum oracle and the analysis formulas.

#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "tribead/analysis.hpp"
#include "tribead/config.hpp"
#include "tribead/errors.hpp"
#include "tribead/io.hpp"
#include "tribead/simulation.hpp"
#include "tribead/swimmer.hpp"
#include "tribead/vacuum_oracle.hpp"

namespace py = pybind11;
using namespace tribead;

namespace {

// Column arrays keyed like the trajectory CSV header.
py::dict records_to_dict(const std::vector<io::TrajectoryRecord>& rows) {
  const auto n = static_cast<py::ssize_t>(rows.size());
  py::array_t<double> t(n), l1(n), l2(n);
  py::array_t<double> z({n, py::ssize_t{3}}), uz({n, py::ssize_t{3}});
  py::array_t<double> fd({n, py::ssize_t{3}}), fh({n, py::ssize_t{3}});
  auto T = t.mutable_unchecked<1>();
  auto L1 = l1.mutable_unchecked<1>();
  auto L2 = l2.mutable_unchecked<1>();
  auto Z = z.mutable_unchecked<2>();
  auto U = uz.mutable_unchecked<2>();
  auto FD = fd.mutable_unchecked<2>();
  auto FH = fh.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    T(i) = static_cast<double>(r.t);
    L1(i) = r.l1;
    L2(i) = r.l2;
    for (py::ssize_t b = 0; b < 3; ++b) {
      Z(i, b) = r.position[static_cast<std::size_t>(b)].z;
      U(i, b) = r.uz[static_cast<std::size_t>(b)];
      FD(i, b) = r.f_drive[static_cast<std::size_t>(b)];
      FH(i, b) = r.f_hydro[static_cast<std::size_t>(b)];
    }
  }
  py::dict d;
  d["t"] = t;
  d["z"] = z;
  d["uz"] = uz;
  d["f_drive"] = fd;
  d["f_hydro"] = fh;
  d["l1"] = l1;
  d["l2"] = l2;
  return d;
}

py::dict report_to_dict(const analysis::PerformanceReport& r) {
  py::dict d;
  d["design"] = std::string(1, r.design);
  d["u_swim"] = r.u_swim;
  d["u_ga"] = r.u_ga;
  d["error_percent"] = r.error_percent;
  d["efficiency"] = r.efficiency;
  d["d1"] = r.arm1.amplitude;
  d["d2"] = r.arm2.amplitude;
  d["phi1"] = r.arm1.phase;
  d["phi2"] = r.arm2.phase;
  d["K"] = r.K;
  d["re_swim"] = r.re_swim;
  d["re_body"] = r.re_body;
  return d;
}

vacuum::VacuumSystem chain(const config::RunConfig& cfg) {
  vacuum::VacuumSystem s;
  s.m = cfg.mass;
  s.k = cfg.stiffness;
  s.gamma = cfg.damping;
  s.l0 = cfg.rest_length;
  s.drive = cfg.drive;
  s.x0 = cfg.vacuum_x0;
  return s;
}

}  // namespace

PYBIND11_MODULE(_tribead, m) {
  m.doc() = "Three-bead swimmer in a lattice Boltzmann fluid";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", base.ptr());
  py::register_exception<UnknownDesign>(m, "UnknownDesign", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<swimmer::DriveProtocol>(m, "DriveProtocol")
      .def(py::init<>())
      .def(py::init([](double a, double T, double phi, double t1, double t2) {
             return swimmer::DriveProtocol{a, T, phi, t1, t2};
           }),
           py::arg("a"), py::arg("T"), py::arg("phi"), py::arg("t1"), py::arg("t2"))
      .def_readwrite("a", &swimmer::DriveProtocol::a)
      .def_readwrite("T", &swimmer::DriveProtocol::T)
      .def_readwrite("phi", &swimmer::DriveProtocol::phi)
      .def_readwrite("t1", &swimmer::DriveProtocol::t1)
      .def_readwrite("t2", &swimmer::DriveProtocol::t2);

  m.def(
      "driving_forces",
      [](const swimmer::DriveProtocol& p, double t) { return swimmer::driving_forces(p, t).by_index(); },
      py::arg("protocol"), py::arg("t"), "Forces on (B2, B1, B3).");

  py::class_<config::RunConfig>(m, "RunConfig")
      .def_readwrite("design", &config::RunConfig::design)
      .def_readwrite("geometry_scale", &config::RunConfig::geometry_scale)
      .def_readwrite("tau", &config::RunConfig::tau)
      .def_readwrite("drive", &config::RunConfig::drive)
      .def_readwrite("mass", &config::RunConfig::mass)
      .def_readwrite("stiffness", &config::RunConfig::stiffness)
      .def_readwrite("damping", &config::RunConfig::damping)
      .def_readwrite("steps", &config::RunConfig::steps)
      .def_property(
          "dims", [](const config::RunConfig& c) { return std::array<int, 3>{c.dims.nx, c.dims.ny, c.dims.nz}; },
          [](config::RunConfig& c, std::array<int, 3> d) { c.dims = {d[0], d[1], d[2]}; })
      .def_property(
          "trajectory_stride", [](const config::RunConfig& c) { return c.output.trajectory_stride; },
          [](config::RunConfig& c, long s) { c.output.trajectory_stride = s; })
      .def("validate", &config::RunConfig::validate)
      .def("to_text", [](const config::RunConfig& c) { return config::to_text(c); });

  m.def("defaults", &config::defaults);
  m.def("parse_config", &config::parse_config, py::arg("text"));
  m.def("load_config", &config::load_config, py::arg("path"));
  m.def(
      "reduced_config", [](char design, double phase) { return config::reduced_config(design, phase); },
      py::arg("design"), py::arg("phase_fraction") = 0.25);

  m.def(
      "run_vacuum",
      [](config::RunConfig cfg) {
        cfg.mode = config::Mode::Vacuum;
        return records_to_dict(sim::run_vacuum(cfg).records);
      },
      py::arg("config"));
  m.def(
      "run_fluid",
      [](const config::RunConfig& cfg) {
        sim::RunResult res;
        {
          py::gil_scoped_release release;
          res = sim::run_fluid(cfg);
        }
        return records_to_dict(res.records);
      },
      py::arg("config"), "Coupled run; returns the trajectory columns.");

  m.def(
      "analytic_solution",
      [](const config::RunConfig& cfg, double t) { return vacuum::analytic_solution(chain(cfg), t).x; },
      py::arg("config"), py::arg("t"), "Closed-form positions of the chain without fluid.");
  m.def(
      "resonance_scan",
      [](const config::RunConfig& cfg, double damping_ratio, double lo, double hi, int points) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : vacuum::resonance_scan(chain(cfg), damping_ratio, lo, hi, points, swimmer::kLeft)) {
          out.emplace_back(p.ratio, p.amplitude_over_a);
        }
        return out;
      },
      py::arg("config"), py::arg("damping_ratio") = 0.07, py::arg("lo") = 0.3, py::arg("hi") = 1.5,
      py::arg("points") = 38);

  m.def("geometric_factor", &analysis::geometric_factor, py::arg("r1"), py::arg("r2"), py::arg("r3"), py::arg("l1"),
        py::arg("l2"));
  m.def("velocity_ga", &analysis::velocity_ga, py::arg("K"), py::arg("d1"), py::arg("d2"), py::arg("omega"),
        py::arg("phi1"), py::arg("phi2"));
  m.def(
      "analyze_file",
      [](const std::string& path) {
        const io::Trajectory traj = io::read_trajectory_file(path);
        return report_to_dict(analysis::analyze(traj.rows, analysis::run_info(traj.meta)));
      },
      py::arg("path"));
  m.def(
      "read_trajectory", [](const std::string& path) { return records_to_dict(io::read_trajectory(path)); },
      py::arg("path"));
}
