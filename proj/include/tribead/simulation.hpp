#pragma once

// Run drivers shared by the CLI, the acceptance suite and the Python module.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tribead/config.hpp"
#include "tribead/io.hpp"

namespace tribead::sim {

struct RunOptions {
  /// Called every `progress_every` steps with the current step.
  std::function<void(long)> progress;
  long progress_every = 0;
  /// Keep flow-field snapshots of the last driven cycle in memory.
  bool keep_snapshots = false;
  /// Use the separate fluid sweeps instead of the fused kernel.
  bool split_fluid = false;
};

struct RunResult {
  std::vector<io::TrajectoryRecord> records;
  io::Metadata meta;
  std::vector<long> snapshot_steps;
  std::vector<io::FieldData> snapshots;
  std::size_t overlap_warnings = 0;
  std::size_t fallback_cells = 0;
  long steps_done = 0;
};

/// Metadata block stored with every trajectory.
[[nodiscard]] io::Metadata metadata(const config::RunConfig& cfg);

/// Steps at which flow-field snapshots are taken.
[[nodiscard]] std::vector<long> snapshot_schedule(const config::RunConfig& cfg);

/// Fluid-coupled swimmer run. Rows are written for t = 0, stride, ... and for
/// the final step; row t holds the state at t and the forces applied in step t
/// (the final row repeats the last hydrodynamic force).
[[nodiscard]] RunResult run_fluid(const config::RunConfig& cfg, const RunOptions& opt = {});

/// The same three bodies, springs and drive without fluid.
[[nodiscard]] RunResult run_vacuum(const config::RunConfig& cfg);

/// Resolved config followed by the unit conversion table.
[[nodiscard]] std::string run_log_header(const config::RunConfig& cfg);

}  // namespace tribead::sim
