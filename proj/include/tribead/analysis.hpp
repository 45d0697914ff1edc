#pragma once

// Post-processing of swimmer runs: arm fits, the Golestanian-Ajdari velocity,
// swimming speed, Reynolds numbers, efficiency and report tables.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tribead/io.hpp"

namespace tribead::analysis {

/// l(t) = mean + amplitude cos(omega t + phase), omega fixed.
struct ArmFit {
  double mean = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double omega = 0.0;
  double rms = 0.0;
  bool ill_conditioned = false;
};

/// Linear least squares on samples with window_begin <= t <= window_end.
/// Throws InsufficientData if the window holds less than one period.
[[nodiscard]] ArmFit fit_arm(std::span<const double> t, std::span<const double> l, double T, double window_begin,
                             double window_end);

[[nodiscard]] double geometric_factor(double r1, double r2, double r3, double l1, double l2);

/// K d1 d2 omega sin(phi1 - phi2).
[[nodiscard]] double velocity_ga(double K, double d1, double d2, double omega, double phi1, double phi2);

/// z displacement over [window_end - T, window_end] divided by T, with linear
/// interpolation between samples.
[[nodiscard]] double measure_u_swim(std::span<const double> t, std::span<const double> z, double T, double window_end);

/// End of the last complete cycle that lies inside both the record and the driven interval.
[[nodiscard]] double last_cycle_end(double t_last, double T, double drive_end);

[[nodiscard]] double reynolds(double u, double l, double nu);

/// 6 pi mu r_eff u^2 / mean_power. Throws NonPositivePower.
[[nodiscard]] double efficiency(double u_swim, double r_eff, double mean_power, double mu);

/// (1/T) * trapezoid integral of sum_i F_dri,i u_i over [window_end - T, window_end].
[[nodiscard]] double mean_drive_power(const std::vector<io::TrajectoryRecord>& rows, double T, double window_end);

/// |(u_ga - u_swim) / u_ga| * 100. Throws DivisionByZero when u_ga is zero.
[[nodiscard]] double velocity_error(double u_ga, double u_swim);

[[nodiscard]] io::FieldData average_flow_field(const std::vector<io::FieldData>& snapshots);

struct RunInfo {
  char design = 'a';
  double scale = 1.0;
  double T = 0.0;
  double nu = 0.0;
  double drive_end = 0.0;  ///< t1
};

/// Reads the metadata block written by the simulator.
[[nodiscard]] RunInfo run_info(const io::Metadata& meta);

struct PerformanceReport {
  char design = 'a';
  double rest_length = 0.0;
  double width = 0.0;
  double window_begin = 0.0;
  double window_end = 0.0;
  ArmFit arm1;
  ArmFit arm2;
  double K = 0.0;
  double u_swim = 0.0;
  double u_ga = 0.0;
  double error_percent = 0.0;
  double efficiency = 0.0;
  double re_swim = 0.0;
  std::array<double, 3> re_body{};  ///< B2, B1, B3
};

[[nodiscard]] PerformanceReport analyze(const std::vector<io::TrajectoryRecord>& rows, const RunInfo& info);

/// One CSV row per design with the columns of the velocity and parameter tables.
[[nodiscard]] std::string report_csv(const std::vector<PerformanceReport>& reports);
/// Fixed-width text tables for the terminal.
[[nodiscard]] std::string report_tables(const std::vector<PerformanceReport>& reports);

}  // namespace tribead::analysis
