#pragma once

// Trajectory CSV and ASCII structured-grid field files.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tribead/lattice.hpp"

namespace tribead::io {

/// Shortest decimal that reads back to the same double; '.' separator regardless of locale.
[[nodiscard]] std::string format_double(double v);
/// 17 significant digits.
[[nodiscard]] std::string format_double17(double v);
/// Locale-independent parse of a full token. Throws ValidationError on junk.
[[nodiscard]] double parse_double(const std::string& token);

/// One row per output stride. Bodies in swimmer order B2, B1, B3.
struct TrajectoryRecord {
  std::int64_t t = 0;
  std::array<Vec3, 3> position{};
  std::array<double, 3> uz{};
  std::array<double, 3> f_drive{};
  std::array<double, 3> f_hydro{};
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Run metadata travels in '# key=value' comment lines above the header row.
using Metadata = std::map<std::string, std::string>;

struct Trajectory {
  Metadata meta;
  std::vector<TrajectoryRecord> rows;
};

[[nodiscard]] std::vector<std::string> trajectory_columns(bool with_xy);
void write_trajectory(const std::vector<TrajectoryRecord>& records, const std::string& path, bool with_xy = false,
                      const Metadata& meta = {});
/// Text form of the file written by write_trajectory.
[[nodiscard]] std::string trajectory_text(const std::vector<TrajectoryRecord>& records, bool with_xy = false,
                                          const Metadata& meta = {});
[[nodiscard]] Trajectory read_trajectory_file(const std::string& path);
[[nodiscard]] std::vector<TrajectoryRecord> read_trajectory(const std::string& path);

/// Macroscopic snapshot; non-fluid cells hold rho = 0 and u = 0.
struct FieldData {
  lbm::Dims dims;
  std::vector<double> rho;
  std::vector<double> ux;
  std::vector<double> uy;
  std::vector<double> uz;
};

[[nodiscard]] FieldData sample_field(const lbm::Lattice& lattice);
void write_field(const FieldData& field, const std::string& path);
void write_field(const lbm::Lattice& lattice, const std::string& path);
[[nodiscard]] FieldData read_field(const std::string& path);

}  // namespace tribead::io
