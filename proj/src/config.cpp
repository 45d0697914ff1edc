#include "tribead/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tribead/errors.hpp"
#include "tribead/io.hpp"
#include "tribead/units.hpp"

namespace tribead::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Fluid:
      return "fluid";
    case Mode::Vacuum:
      return "vacuum";
    case Mode::FrequencyScan:
      return "frequency-scan";
  }
  return "fluid";
}

// Protocol times that follow T unless set explicitly.
struct Explicit {
  bool phi = false;
  bool t1 = false;
  bool t2 = false;
  bool steps = false;
};

void derive_times(RunConfig& c, const Explicit& ex) {
  const double T = c.drive.T;
  if (!ex.phi) c.drive.phi = T / 4.0;
  if (!ex.t1) c.drive.t1 = 5.0 * T;
  if (!ex.t2) c.drive.t2 = 5.0 * T + T / 4.0;
  if (!ex.steps) c.steps = std::lround(7.0 * T);
}

}  // namespace

RunConfig defaults() {
  const units::PhysicalParams phys;
  const units::LatticeParams lat = units::unit_bridge(phys);
  RunConfig c;
  c.tau = lat.tau;
  c.mass = lat.mass;
  c.stiffness = lat.stiffness;
  c.damping = lat.damping;
  c.drive.a = lat.force_amplitude;
  c.drive.T = phys.period_steps;
  derive_times(c, {});
  return c;
}

void RunConfig::validate() const {
  if (dims.nx < 3 || dims.ny < 3 || dims.nz < 3) throw ValidationError("domain needs at least 3 cells per axis");
  if (!(tau > 0.5)) throw ValidationError("tau must exceed 0.5 (got " + io::format_double(tau) + ")");
  if (!(mass > 0.0)) throw ValidationError("mass must be positive");
  if (!(stiffness > 0.0)) throw ValidationError("spring stiffness k must be positive");
  if (!(damping >= 0.0)) throw ValidationError("spring damping gamma must be non-negative");
  if (!(geometry_scale > 0.0)) throw ValidationError("geometry_scale must be positive");
  if (steps < 0) throw ValidationError("steps must be non-negative");
  if (output.trajectory_stride < 1) throw ValidationError("trajectory_stride must be at least 1");
  if (output.field_stride < 0) throw ValidationError("field_stride must be non-negative");
  if (output.scan_points < 3) throw ValidationError("scan_points must be at least 3");
  if (!(output.scan_lo > 0.0 && output.scan_hi > output.scan_lo)) throw ValidationError("scan range must satisfy 0 < lo < hi");
  drive.validate();
  try {
    const swimmer::SwimmerDesign d = swimmer::design(design);
    if (mode == Mode::Fluid) {
      (void)swimmer::build_swimmer(d, dims, {mass, stiffness, damping, geometry_scale});
    }
  } catch (const UnknownDesign& e) {
    throw ValidationError(e.what());
  } catch (const OutOfDomain& e) {
    throw ValidationError(e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig c = defaults();
  Explicit ex;
  using Setter = std::function<void(const std::string&)>;
  auto num = [](double& dst) -> Setter { return [&dst](const std::string& v) { dst = io::parse_double(v); }; };
  auto count = [](auto& dst) -> Setter {
    return [&dst](const std::string& v) {
      const double x = io::parse_double(v);
      if (x != std::floor(x)) throw ValidationError("expected an integer, got '" + v + "'");
      dst = static_cast<std::remove_reference_t<decltype(dst)>>(x);
    };
  };
  auto flagged = [](Setter s, bool& mark) -> Setter {
    return [s, &mark](const std::string& v) {
      s(v);
      mark = true;
    };
  };

  std::map<std::string, std::map<std::string, Setter>> keys;
  keys["domain"] = {
      {"nx", count(c.dims.nx)},
      {"ny", count(c.dims.ny)},
      {"nz", count(c.dims.nz)},
      {"tau", num(c.tau)},
      {"geometry_scale", num(c.geometry_scale)},
      {"design",
       [&c](const std::string& v) {
         if (v.size() != 1) throw ValidationError("design must be a single letter a-q");
         c.design = v[0];
       }},
      {"mode",
       [&c](const std::string& v) {
         if (v == "fluid") {
           c.mode = Mode::Fluid;
         } else if (v == "vacuum") {
           c.mode = Mode::Vacuum;
         } else if (v == "frequency-scan") {
           c.mode = Mode::FrequencyScan;
         } else {
           throw ValidationError("mode must be fluid, vacuum or frequency-scan");
         }
       }},
  };
  keys["drive"] = {
      {"a", num(c.drive.a)},
      {"T", num(c.drive.T)},
      {"phi", flagged(num(c.drive.phi), ex.phi)},
      {"t1", flagged(num(c.drive.t1), ex.t1)},
      {"t2", flagged(num(c.drive.t2), ex.t2)},
      {"steps", flagged(count(c.steps), ex.steps)},
  };
  keys["springs"] = {
      {"k", num(c.stiffness)},
      {"gamma", num(c.damping)},
      {"mass", num(c.mass)},
      {"l0", num(c.rest_length)},
      {"x_b2", num(c.vacuum_x0[0])},
      {"x_b1", num(c.vacuum_x0[1])},
      {"x_b3", num(c.vacuum_x0[2])},
  };
  keys["output"] = {
      {"trajectory_stride", count(c.output.trajectory_stride)},
      {"field_stride", count(c.output.field_stride)},
      {"fields",
       [&c](const std::string& v) {
         if (v == "true" || v == "1") {
           c.output.fields = true;
         } else if (v == "false" || v == "0") {
           c.output.fields = false;
         } else {
           throw ValidationError("fields must be true or false");
         }
       }},
      {"trajectory", [&c](const std::string& v) { c.output.trajectory = v; }},
      {"field_dir", [&c](const std::string& v) { c.output.field_dir = v; }},
      {"scan_points", count(c.output.scan_points)},
      {"scan_lo", num(c.output.scan_lo)},
      {"scan_hi", num(c.output.scan_hi)},
      {"scan_damping", num(c.output.scan_damping)},
  };

  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (keys.find(section) == keys.end()) throw ParseError(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    if (section.empty()) throw ParseError(line_no, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto& table = keys[section];
    const auto it = table.find(key);
    if (it == table.end()) throw ParseError(line_no, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    try {
      it->second(value);
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  derive_times(c, ex);
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  using io::format_double;
  std::ostringstream os;
  os << "[domain]\n"
     << "mode = " << mode_name(c.mode) << "\n"
     << "nx = " << c.dims.nx << "\nny = " << c.dims.ny << "\nnz = " << c.dims.nz << "\n"
     << "tau = " << format_double(c.tau) << "\n"
     << "design = " << c.design << "\n"
     << "geometry_scale = " << format_double(c.geometry_scale) << "\n"
     << "# viscosity = " << format_double((c.tau - 0.5) / 3.0) << "\n"
     << "[drive]\n"
     << "a = " << format_double(c.drive.a) << "\nT = " << format_double(c.drive.T) << "\n"
     << "phi = " << format_double(c.drive.phi) << "\n"
     << "t1 = " << format_double(c.drive.t1) << "\nt2 = " << format_double(c.drive.t2) << "\n"
     << "steps = " << c.steps << "\n"
     << "[springs]\n"
     << "k = " << format_double(c.stiffness) << "\ngamma = " << format_double(c.damping) << "\n"
     << "mass = " << format_double(c.mass) << "\n"
     << "# damping ratio = " << format_double(c.damping / (2.0 * std::sqrt(c.mass * c.stiffness))) << "\n"
     << "l0 = " << format_double(c.rest_length) << "\n"
     << "x_b2 = " << format_double(c.vacuum_x0[0]) << "\nx_b1 = " << format_double(c.vacuum_x0[1])
     << "\nx_b3 = " << format_double(c.vacuum_x0[2]) << "\n"
     << "[output]\n"
     << "trajectory_stride = " << c.output.trajectory_stride << "\n"
     << "field_stride = " << c.output.field_stride << "\n"
     << "fields = " << (c.output.fields ? "true" : "false") << "\n"
     << "trajectory = " << c.output.trajectory << "\n"
     << "field_dir = " << c.output.field_dir << "\n"
     << "scan_points = " << c.output.scan_points << "\n"
     << "scan_lo = " << format_double(c.output.scan_lo) << "\nscan_hi = " << format_double(c.output.scan_hi) << "\n"
     << "scan_damping = " << format_double(c.output.scan_damping) << "\n";
  return os.str();
}

RunConfig reduced_config(char design, double phase_fraction, const ReducedPreset& p) {
  const RunConfig full = defaults();
  RunConfig c = full;
  const double lam = p.length_scale;
  const double period = std::round(full.drive.T / p.time_scale);
  const double sigma = full.drive.T / period;
  const double nu = (full.tau - 0.5) / 3.0 * lam * lam * sigma;
  c.dims = p.dims;
  c.design = design;
  c.geometry_scale = lam;
  c.tau = 3.0 * nu + 0.5;
  c.mass = full.mass * lam * lam * lam;
  c.stiffness = full.stiffness * lam * lam * lam * sigma * sigma;
  c.damping = full.damping * lam * lam * lam * sigma;
  c.drive.a = full.drive.a * lam * lam * lam * lam * sigma * sigma;
  c.drive.T = period;
  c.drive.phi = phase_fraction * period;
  c.steps = std::lround(p.cycles * period);
  // Drive stays on for the whole run.
  c.drive.t1 = static_cast<double>(c.steps) + period;
  c.drive.t2 = c.drive.t1;
  c.validate();
  return c;
}

}  // namespace tribead::config
