#pragma once

// Physical <-> lattice unit conversion.
//
// The lattice spacing fixes the length unit, the fluid density the mass unit
// and the ratio of lattice to physical driving frequency the time step.

#include <string>

namespace tribead::units {

/// Production parameters in SI units.
struct PhysicalParams {
  double dx = 1e-6;                  ///< m
  double density = 1.36;             ///< kg/m^3
  double viscosity = 7.36e-5;        ///< m^2/s
  double omega = 296057.86703;       ///< driving frequency, 1/s
  double omega_lattice = 0.0;        ///< driving frequency per step; <= 0 means 2 pi / period_steps
  double period_steps = 28116.0;
  double mass = 5.44e-13;            ///< kg
  double stiffness = 1.72965;        ///< kg/s^2
  double damping = 1.57237e-7;       ///< kg/s
  double force_amplitude = 1e-5;     ///< N
};

struct LatticeParams {
  double dt = 0.0;          ///< s per step
  double mass_unit = 0.0;   ///< kg
  double force_unit = 0.0;  ///< N
  double omega = 0.0;       ///< 1/step
  double viscosity = 0.0;
  double tau = 0.0;
  double mass = 0.0;
  double stiffness = 0.0;
  double damping = 0.0;
  double force_amplitude = 0.0;
};

[[nodiscard]] LatticeParams unit_bridge(const PhysicalParams& p);

/// Human-readable conversion table for run logs.
[[nodiscard]] std::string conversion_table(const PhysicalParams& p, const LatticeParams& l);

}  // namespace tribead::units
