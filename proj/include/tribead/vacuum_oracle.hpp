#pragma once

// Driven, damped three-mass chain without fluid.
//
// Equal masses m joined by two springs (k, gamma, rest length l0) with the
// swimmer drive on the masses. Damping acts on relative velocities, so the
// centre-of-mass mode is free and the two relative modes (eigenvalues 1 and 3
// of the chain Laplacian) are damped oscillators with sinusoidal forcing.

#include <array>
#include <complex>
#include <vector>

#include "tribead/swimmer.hpp"

namespace tribead::vacuum {

/// Masses are ordered like the swimmer: B2 (left), B1 (middle), B3 (right).
struct VacuumSystem {
  double m = 1.0;
  double k = 1.0;
  double gamma = 0.0;
  double l0 = 0.0;
  swimmer::DriveProtocol drive;
  std::array<double, 3> x0{};
  std::array<double, 3> v0{};

  void validate() const;
};

struct State {
  double t = 0.0;
  std::array<double, 3> x{};
  std::array<double, 3> v{};
  std::array<double, 3> a{};
};

/// Closed-form positions and velocities at time t (piecewise in the switch times).
[[nodiscard]] State analytic_solution(const VacuumSystem& s, double t);

struct SteadyOscillation {
  double amplitude = 0.0;
  double phase = 0.0;  ///< x = mean + amplitude sin(omega t + phase)
  double mean = 0.0;   ///< mean position (rest layout shifted by the centre of mass)
};

/// Steady oscillation of `mass` (0 = B2, 1 = B1, 2 = B3) with both drives on and no switch-off.
[[nodiscard]] SteadyOscillation steady_state(const VacuumSystem& s, int mass);
[[nodiscard]] double steady_amplitude(const VacuumSystem& s, int mass);

/// Classical RK4 of the same equations, sampled every `sample_every` steps (and at the end).
[[nodiscard]] std::vector<State> integrate_reference(const VacuumSystem& s, long steps, double dt,
                                                     long sample_every = 1);

/// Total mechanical energy: kinetic plus spring potential.
[[nodiscard]] double energy(const VacuumSystem& s, const State& st);

/// Residual max_i |m a_i - F_i| of the equations of motion at (x, v, a).
[[nodiscard]] double residual(const VacuumSystem& s, double t, const std::array<double, 3>& x,
                              const std::array<double, 3>& v, const std::array<double, 3>& a);
/// Accelerations from the equations of motion.
[[nodiscard]] std::array<double, 3> acceleration(const VacuumSystem& s, double t, const std::array<double, 3>& x,
                                                 const std::array<double, 3>& v);

struct ScanPoint {
  double ratio = 0.0;          ///< omega0 / omega
  double amplitude_over_a = 0.0;
};

/// A/a of `mass` for `points` uniformly spaced omega0/omega in [lo, hi] at fixed
/// damping ratio D; k and gamma follow from omega0 and D at fixed m and omega.
[[nodiscard]] std::vector<ScanPoint> resonance_scan(const VacuumSystem& base, double damping_ratio, double lo,
                                                    double hi, int points, int mass = 0);

/// Indices of strict interior local maxima.
[[nodiscard]] std::vector<std::size_t> local_maxima(const std::vector<ScanPoint>& scan);

void write_scan_csv(const std::vector<ScanPoint>& scan, const std::string& path);

}  // namespace tribead::vacuum
