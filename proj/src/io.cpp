#include "tribead/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tribead/errors.hpp"

namespace tribead::io {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_double17(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || first == last) {
    throw ValidationError("not a number: '" + token + "'");
  }
  return v;
}

namespace {

const std::array<const char*, 3> kBodyNames{"b2", "b1", "b3"};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::string> trajectory_columns(bool with_xy) {
  std::vector<std::string> cols{"t"};
  for (const char* b : kBodyNames) {
    if (with_xy) {
      cols.push_back(std::string("x_") + b);
      cols.push_back(std::string("y_") + b);
    }
    cols.push_back(std::string("z_") + b);
  }
  for (const char* b : kBodyNames) cols.push_back(std::string("uz_") + b);
  for (const char* b : kBodyNames) cols.push_back(std::string("fdri_z_") + b);
  for (const char* b : kBodyNames) cols.push_back(std::string("fhyd_z_") + b);
  cols.emplace_back("l1");
  cols.emplace_back("l2");
  return cols;
}

std::string trajectory_text(const std::vector<TrajectoryRecord>& records, bool with_xy, const Metadata& meta) {
  std::ostringstream os;
  os << "# lattice units: length in cells, time in steps, density 1, body order B2 B1 B3\n";
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  const auto cols = trajectory_columns(with_xy);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const TrajectoryRecord& r : records) {
    os << r.t;
    for (const Vec3& p : r.position) {
      if (with_xy) os << ',' << format_double(p.x) << ',' << format_double(p.y);
      os << ',' << format_double(p.z);
    }
    for (double v : r.uz) os << ',' << format_double(v);
    for (double v : r.f_drive) os << ',' << format_double(v);
    for (double v : r.f_hydro) os << ',' << format_double(v);
    os << ',' << format_double(r.l1) << ',' << format_double(r.l2) << '\n';
  }
  return os.str();
}

void write_trajectory(const std::vector<TrajectoryRecord>& records, const std::string& path, bool with_xy,
                      const Metadata& meta) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << trajectory_text(records, with_xy, meta);
  if (!os) throw IoError("write failed for " + path);
}

Trajectory read_trajectory_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  Trajectory out;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.size() > 2 && eq != std::string::npos) out.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    header = split(line, ',');
    break;
  }
  if (header.empty()) throw IoError(path + ": missing header row");
  const bool with_xy = header == trajectory_columns(true);
  if (!with_xy && header != trajectory_columns(false)) throw IoError(path + ": unexpected trajectory columns");

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw IoError(path + ": row with " + std::to_string(f.size()) + " fields");
    TrajectoryRecord r;
    std::size_t c = 0;
    try {
      r.t = static_cast<std::int64_t>(parse_double(f[c++]));
      for (Vec3& p : r.position) {
        if (with_xy) {
          p.x = parse_double(f[c++]);
          p.y = parse_double(f[c++]);
        }
        p.z = parse_double(f[c++]);
      }
      for (double& v : r.uz) v = parse_double(f[c++]);
      for (double& v : r.f_drive) v = parse_double(f[c++]);
      for (double& v : r.f_hydro) v = parse_double(f[c++]);
      r.l1 = parse_double(f[c++]);
      r.l2 = parse_double(f[c++]);
    } catch (const ValidationError& e) {
      throw IoError(path + ": " + e.what());
    }
    out.rows.push_back(r);
  }
  return out;
}

std::vector<TrajectoryRecord> read_trajectory(const std::string& path) { return read_trajectory_file(path).rows; }

FieldData sample_field(const lbm::Lattice& lattice) {
  FieldData fd;
  fd.dims = lattice.dims();
  const std::size_t n = lattice.cells();
  fd.rho.assign(n, 0.0);
  fd.ux.assign(n, 0.0);
  fd.uy.assign(n, 0.0);
  fd.uz.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (!lattice.is_fluid(c)) continue;
    const lbm::Moments m = lbm::macroscopic(lattice, c);
    fd.rho[c] = m.rho;
    fd.ux[c] = m.u.x;
    fd.uy[c] = m.u.y;
    fd.uz[c] = m.u.z;
  }
  return fd;
}

void write_field(const FieldData& field, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "# structured grid, lattice units, x fastest\n";
  os << "dims " << field.dims.nx << ' ' << field.dims.ny << ' ' << field.dims.nz << '\n';
  os << "spacing 1 1 1\norigin 0 0 0\n";
  os << "fields rho ux uy uz\n";
  for (std::size_t c = 0; c < field.rho.size(); ++c) {
    os << format_double17(field.rho[c]) << ' ' << format_double17(field.ux[c]) << ' '
       << format_double17(field.uy[c]) << ' ' << format_double17(field.uz[c]) << '\n';
  }
  if (!os) throw IoError("write failed for " + path);
}

void write_field(const lbm::Lattice& lattice, const std::string& path) { write_field(sample_field(lattice), path); }

FieldData read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  FieldData fd;
  std::string line;
  bool have_dims = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dims") {
      ls >> fd.dims.nx >> fd.dims.ny >> fd.dims.nz;
      have_dims = static_cast<bool>(ls);
    } else if (key == "fields") {
      break;
    }
  }
  if (!have_dims) throw IoError(path + ": missing dims line");
  const std::size_t n = fd.dims.cells();
  fd.rho.reserve(n);
  fd.ux.reserve(n);
  fd.uy.reserve(n);
  fd.uz.reserve(n);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ' ');
    if (f.size() != 4) throw IoError(path + ": field row needs 4 values");
    try {
      fd.rho.push_back(parse_double(f[0]));
      fd.ux.push_back(parse_double(f[1]));
      fd.uy.push_back(parse_double(f[2]));
      fd.uz.push_back(parse_double(f[3]));
    } catch (const ValidationError& e) {
      throw IoError(path + ": " + e.what());
    }
  }
  if (fd.rho.size() != n) throw IoError(path + ": expected " + std::to_string(n) + " cells");
  return fd;
}

}  // namespace tribead::io
