#pragma once

// Run configuration: INI-like text with [domain] [drive] [springs] [output]
// sections, '#' comments and `key = value` lines. Every value is in lattice
// units. An empty file is the production run.

#include <optional>
#include <string>

#include "tribead/lattice.hpp"
#include "tribead/swimmer.hpp"

namespace tribead::config {

enum class Mode { Fluid, Vacuum, FrequencyScan };

struct OutputConfig {
  long trajectory_stride = 1;
  /// Steps between flow-field snapshots; 0 picks T/8 within the last driven cycle.
  long field_stride = 0;
  bool fields = false;
  std::string trajectory = "trajectory.csv";
  std::string field_dir = "fields";
  int scan_points = 38;
  double scan_lo = 0.3;
  double scan_hi = 1.5;
  double scan_damping = 0.07;
};

struct RunConfig {
  Mode mode = Mode::Fluid;
  lbm::Dims dims{100, 100, 200};
  char design = 'a';
  double geometry_scale = 1.0;
  double tau = 0.0;
  swimmer::DriveProtocol drive;
  double mass = 0.0;
  double stiffness = 0.0;
  double damping = 0.0;
  double rest_length = 25.0;            ///< vacuum chain only
  std::array<double, 3> vacuum_x0{25.0, 50.0, 75.0};
  long steps = 0;
  OutputConfig output;

  /// Throws ValidationError naming the violated precondition.
  void validate() const;
};

/// Production run: 100x100x200, design a, T = 28116, 196812 steps.
[[nodiscard]] RunConfig defaults();

/// Throws ParseError (with line number) or ValidationError.
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Fully resolved config in the same text format.
[[nodiscard]] std::string to_text(const RunConfig& cfg);

struct ReducedPreset {
  double length_scale = 0.75;
  double time_scale = 10.0;  ///< the period shrinks by this factor
  lbm::Dims dims{60, 60, 120};
  int cycles = 3;
};

/// Dynamically similar small run: lengths times length_scale, time compressed
/// by time_scale, keeping the frequency ratio, damping ratio, Reynolds number
/// and unsteadiness number of the production run.
[[nodiscard]] RunConfig reduced_config(char design, double phase_fraction, const ReducedPreset& preset = {});

}  // namespace tribead::config
