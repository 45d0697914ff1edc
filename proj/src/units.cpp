#include "tribead/units.hpp"

#include <numbers>
#include <sstream>

#include "tribead/errors.hpp"

namespace tribead::units {

LatticeParams unit_bridge(const PhysicalParams& p) {
  if (!(p.dx > 0.0) || !(p.density > 0.0) || !(p.omega > 0.0)) {
    throw ValidationError("unit bridge needs positive dx, density and frequency");
  }
  LatticeParams l;
  l.omega = p.omega_lattice > 0.0 ? p.omega_lattice : 2.0 * std::numbers::pi / p.period_steps;
  l.dt = l.omega / p.omega;
  l.mass_unit = p.density * p.dx * p.dx * p.dx;
  l.force_unit = l.mass_unit * p.dx / (l.dt * l.dt);
  l.viscosity = p.viscosity * l.dt / (p.dx * p.dx);
  l.tau = 3.0 * l.viscosity + 0.5;
  l.mass = p.mass / l.mass_unit;
  l.stiffness = p.stiffness * l.dt * l.dt / l.mass_unit;
  l.damping = p.damping * l.dt / l.mass_unit;
  l.force_amplitude = p.force_amplitude / l.force_unit;
  return l;
}

std::string conversion_table(const PhysicalParams& p, const LatticeParams& l) {
  std::ostringstream os;
  os.precision(6);
  os << "unit conversion\n"
     << "  dx          " << p.dx << " m        -> 1 cell\n"
     << "  dt          " << l.dt << " s        (omega_lat / omega = " << l.omega << " / " << p.omega << ")\n"
     << "  mass unit   " << l.mass_unit << " kg\n"
     << "  force unit  " << l.force_unit << " N\n"
     << "  viscosity   " << p.viscosity << " m^2/s -> " << l.viscosity << " (tau " << l.tau << ")\n"
     << "  mass        " << p.mass << " kg -> " << l.mass << "\n"
     << "  stiffness   " << p.stiffness << " kg/s^2 -> " << l.stiffness << "\n"
     << "  damping     " << p.damping << " kg/s -> " << l.damping << "\n"
     << "  amplitude   " << p.force_amplitude << " N -> " << l.force_amplitude << "\n";
  return os.str();
}

}  // namespace tribead::units
