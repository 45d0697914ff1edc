#pragma once

// Translational rigid bodies joined by damped harmonic springs.
//
// One rigid-body step: detect contacts (overlap warning only, no response),
// resolve constraint forces (springs), integrate with semi-implicit Euler.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tribead/vec3.hpp"

namespace tribead::rigid {

struct Sphere {
  double radius = 0.0;
};

/// Cylinder of `length` capped by hemispheres of `radius`, oriented along `axis`.
struct Capsule {
  double radius = 0.0;
  double length = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};
};

using Shape = std::variant<Sphere, Capsule>;

enum class MotionConstraint : std::uint8_t { ZOnly, Free3D };

struct Body {
  int id = 0;
  Shape shape;
  double mass = 1.0;
  Vec3 position;
  Vec3 velocity;
  Vec3 force;  ///< accumulator, cleared by integrate()
  MotionConstraint constraint = MotionConstraint::ZOnly;

  /// Throws ValidationError when mass/radius/axis invariants are violated.
  void validate() const;
  [[nodiscard]] double radius() const;
  /// Half of the body's extent along the given unit direction.
  [[nodiscard]] double half_extent(const Vec3& direction) const;
  /// Point-in-body test used for lattice mapping.
  [[nodiscard]] bool contains(const Vec3& point) const;
  /// Distance from point to the body surface (negative inside).
  [[nodiscard]] double surface_distance(const Vec3& point) const;
};

struct Spring {
  int body_i = 0;
  int body_j = 1;
  double stiffness = 0.0;  ///< k
  double damping = 0.0;    ///< gamma
  Vec3 rest;               ///< rest offset x_i - x_j

  void validate() const;
};

struct SpringForce {
  Vec3 on_i;
  Vec3 on_j;
};

/// Force exerted by one spring: on_i = -k dx - gamma du, on_j = -on_i, with
/// dx = (x_i - x_j) - rest and du = u_i - u_j.
[[nodiscard]] SpringForce spring_force(const Spring& spring, const Body& bi, const Body& bj);

/// Per-body spring force totals, indexed like `bodies`.
[[nodiscard]] std::vector<Vec3> spring_forces(std::span<const Body> bodies, std::span<const Spring> springs);

/// gamma / (2 sqrt(m k)).
[[nodiscard]] double damping_ratio(double mass, double stiffness, double damping);

struct Overlap {
  int body_a;
  int body_b;
  double depth;
};

/// Adds spring forces to the accumulators. Reports interpenetrating body pairs.
std::vector<Overlap> resolve_constraints(std::span<Body> bodies, std::span<const Spring> springs);

/// Semi-implicit Euler: u += F/m dt, then x += u dt. Clears accumulators.
/// Throws NonFiniteState if the state becomes non-finite.
void integrate(std::span<Body> bodies, double dt = 1.0);

/// Total kinetic plus spring potential energy.
[[nodiscard]] double mechanical_energy(std::span<const Body> bodies, std::span<const Spring> springs);

[[nodiscard]] std::string describe(const Shape& shape);

}  // namespace tribead::rigid
