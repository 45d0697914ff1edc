#pragma once

// Three-body swimmers: design catalogue, builder and the force protocol.
//
// Bodies are stored left to right along +z: B2 (left), B1 (middle), B3 (right).
// Arm l1 = z(B1) - z(B2), arm l2 = z(B3) - z(B1). A swimmer with l1 leading
// l2 in phase moves toward +z.

#include <array>
#include <string>
#include <vector>

#include "tribead/lattice.hpp"
#include "tribead/rigid_body.hpp"

namespace tribead::swimmer {

inline constexpr int kLeft = 0;    ///< B2
inline constexpr int kMiddle = 1;  ///< B1
inline constexpr int kRight = 2;   ///< B3

struct DriveProtocol {
  double a = 0.0;      ///< force amplitude
  double T = 1.0;      ///< period in steps
  double phi = 0.25;   ///< delay of the B3 drive in steps
  double t1 = 0.0;     ///< B2 drive switched off from here on
  double t2 = 0.0;     ///< B3 (and therefore B1) drive switched off from here on

  void validate() const;
};

/// Driving forces along z, in body order.
struct DriveForces {
  double b2 = 0.0;
  double b3 = 0.0;
  double b1 = 0.0;

  [[nodiscard]] std::array<double, 3> by_index() const { return {b2, b1, b3}; }
};

/// F2 = -a sin(2 pi t / T) for t < t1. F3 = a sin(2 pi (t - phi) / T) for
/// phi <= t < t2 and zero before the delay has elapsed. F1 = -(F2 + F3).
[[nodiscard]] DriveForces driving_forces(const DriveProtocol& p, double t);

enum class SlotShape { Sphere, LargeSphere, CapsuleParallel, CapsulePerpendicular };

struct SwimmerDesign {
  char id = 'a';
  std::array<SlotShape, 3> slots{};  ///< B2, B1, B3
  std::array<double, 2> gaps{};      ///< surface gaps of S1 (B2-B1) and S2 (B1-B3), unscaled cells

  [[nodiscard]] double rest_total_length() const;
  [[nodiscard]] double width() const;
};

/// Geometry of the unscaled catalogue.
inline constexpr double kSphereRadius = 4.0;
inline constexpr double kLargeSphereRadius = 8.0;
inline constexpr double kCapsuleRadius = 4.0;
inline constexpr double kCapsuleLength = 8.0;
/// Radius of the sphere that stands in for a capsule in the GA formulas.
inline constexpr double kCapsuleEquivalentRadius = 6.0;

[[nodiscard]] SwimmerDesign design(char id);
[[nodiscard]] const std::vector<char>& design_ids();

/// Shape of one slot with every length multiplied by `scale`.
[[nodiscard]] rigid::Shape slot_shape(SlotShape s, double scale = 1.0);
/// Half extent of a slot along z.
[[nodiscard]] double slot_half_length(SlotShape s, double scale = 1.0);
/// Radius used for K and the efficiency's effective radius.
[[nodiscard]] double slot_equivalent_radius(SlotShape s, double scale = 1.0);

struct SwimmerParams {
  double mass = 1.0;
  double stiffness = 1.0;
  double damping = 0.0;
  double scale = 1.0;  ///< multiplies every length of the design
};

struct Swimmer {
  SwimmerDesign design;
  double scale = 1.0;
  std::vector<rigid::Body> bodies;    ///< B2, B1, B3
  std::vector<rigid::Spring> springs; ///< S1 (B2 -> B1), S2 (B3 -> B1)

  [[nodiscard]] double arm1() const;
  [[nodiscard]] double arm2() const;
  [[nodiscard]] double rest_arm1() const;
  [[nodiscard]] double rest_arm2() const;
  [[nodiscard]] std::array<double, 3> equivalent_radii() const;
};

/// Centers the swimmer with its middle body at dims / 2 and its axis along z.
/// Throws OutOfDomain if a body comes within one cell of the wall layer.
[[nodiscard]] Swimmer build_swimmer(const SwimmerDesign& design, const lbm::Dims& dims, const SwimmerParams& params);

/// Stage of the swimming cycle for diagnostics: 1 = (i) ... 10 = (x).
[[nodiscard]] int cycle_phase(const DriveProtocol& p, double t);
[[nodiscard]] std::string cycle_phase_label(int stage);

}  // namespace tribead::swimmer
