#include "tribead/swimmer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tribead/errors.hpp"

namespace tribead::swimmer {

void DriveProtocol::validate() const {
  if (!(T > 0.0)) throw ValidationError("drive period T must be positive");
  if (!(phi >= 0.0 && phi < T)) throw ValidationError("drive phase shift must satisfy 0 <= phi < T");
  if (!(t1 <= t2)) throw ValidationError("switch-off times must satisfy t1 <= t2");
  if (!std::isfinite(a)) throw ValidationError("drive amplitude must be finite");
}

DriveForces driving_forces(const DriveProtocol& p, double t) {
  const double w = 2.0 * std::numbers::pi / p.T;
  DriveForces f;
  if (t < p.t1) f.b2 = -p.a * std::sin(w * t);
  if (t >= p.phi && t < p.t2) f.b3 = p.a * std::sin(w * (t - p.phi));
  f.b1 = -(f.b2 + f.b3);
  return f;
}

namespace {

using S = SlotShape;

bool perpendicular(S s) { return s == S::CapsulePerpendicular; }

// Gaps of the g-k family grow when perpendicular capsules face each other.
double wide_gap(S a, S b) {
  const int caps = (perpendicular(a) ? 1 : 0) + (perpendicular(b) ? 1 : 0);
  return caps == 2 ? 16.0 : caps == 1 ? 12.0 : 8.0;
}

SwimmerDesign make(char id, S b2, S b1, S b3, bool wide) {
  SwimmerDesign d;
  d.id = id;
  d.slots = {b2, b1, b3};
  d.gaps = wide ? std::array<double, 2>{wide_gap(b2, b1), wide_gap(b1, b3)} : std::array<double, 2>{8.0, 8.0};
  return d;
}

}  // namespace

const std::vector<char>& design_ids() {
  static const std::vector<char> ids{'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i',
                                     'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q'};
  return ids;
}

SwimmerDesign design(char id) {
  const S sp = S::Sphere;
  // Families share slot patterns: capsule at B2, at B1, at B3, at both ends, everywhere.
  auto family = [&](int member, S cap, bool wide, char letter) {
    switch (member) {
      case 0: return make(letter, cap, sp, sp, wide);
      case 1: return make(letter, sp, cap, sp, wide);
      case 2: return make(letter, sp, sp, cap, wide);
      case 3: return make(letter, cap, sp, cap, wide);
      default: return make(letter, cap, cap, cap, wide);
    }
  };
  if (id == 'a') return make('a', sp, sp, sp, false);
  if (id >= 'b' && id <= 'f') return family(id - 'b', S::CapsuleParallel, false, id);
  if (id >= 'g' && id <= 'k') return family(id - 'g', S::CapsulePerpendicular, true, id);
  if (id >= 'l' && id <= 'p') return family(id - 'l', S::CapsulePerpendicular, false, id);
  if (id == 'q') return make('q', S::LargeSphere, S::LargeSphere, S::LargeSphere, false);
  throw UnknownDesign(std::string("unknown swimmer design '") + id + "'");
}

rigid::Shape slot_shape(SlotShape s, double scale) {
  switch (s) {
    case S::Sphere:
      return rigid::Sphere{kSphereRadius * scale};
    case S::LargeSphere:
      return rigid::Sphere{kLargeSphereRadius * scale};
    case S::CapsuleParallel:
      return rigid::Capsule{kCapsuleRadius * scale, kCapsuleLength * scale, Vec3{0.0, 0.0, 1.0}};
    case S::CapsulePerpendicular:
      return rigid::Capsule{kCapsuleRadius * scale, kCapsuleLength * scale, Vec3{1.0, 0.0, 0.0}};
  }
  return rigid::Sphere{};
}

double slot_half_length(SlotShape s, double scale) {
  switch (s) {
    case S::Sphere:
      return kSphereRadius * scale;
    case S::LargeSphere:
      return kLargeSphereRadius * scale;
    case S::CapsuleParallel:
      return (kCapsuleRadius + 0.5 * kCapsuleLength) * scale;
    case S::CapsulePerpendicular:
      return kCapsuleRadius * scale;
  }
  return 0.0;
}

namespace {

double slot_half_width(SlotShape s) {
  switch (s) {
    case S::Sphere:
      return kSphereRadius;
    case S::LargeSphere:
      return kLargeSphereRadius;
    case S::CapsuleParallel:
      return kCapsuleRadius;
    case S::CapsulePerpendicular:
      return kCapsuleRadius + 0.5 * kCapsuleLength;
  }
  return 0.0;
}

}  // namespace

double slot_equivalent_radius(SlotShape s, double scale) {
  switch (s) {
    case S::Sphere:
      return kSphereRadius * scale;
    case S::LargeSphere:
      return kLargeSphereRadius * scale;
    case S::CapsuleParallel:
    case S::CapsulePerpendicular:
      return kCapsuleEquivalentRadius * scale;
  }
  return 0.0;
}

double SwimmerDesign::rest_total_length() const {
  double len = gaps[0] + gaps[1];
  for (SlotShape s : slots) len += 2.0 * slot_half_length(s);
  return len;
}

double SwimmerDesign::width() const {
  double w = 0.0;
  for (SlotShape s : slots) w = std::max(w, 2.0 * slot_half_width(s));
  return w;
}

double Swimmer::arm1() const { return bodies[kMiddle].position.z - bodies[kLeft].position.z; }
double Swimmer::arm2() const { return bodies[kRight].position.z - bodies[kMiddle].position.z; }
double Swimmer::rest_arm1() const { return -springs[0].rest.z; }
double Swimmer::rest_arm2() const { return springs[1].rest.z; }

std::array<double, 3> Swimmer::equivalent_radii() const {
  return {slot_equivalent_radius(design.slots[0], scale), slot_equivalent_radius(design.slots[1], scale),
          slot_equivalent_radius(design.slots[2], scale)};
}

Swimmer build_swimmer(const SwimmerDesign& d, const lbm::Dims& dims, const SwimmerParams& params) {
  if (!(params.scale > 0.0)) throw ValidationError("geometry scale must be positive");
  Swimmer sw;
  sw.design = d;
  sw.scale = params.scale;
  const double s = params.scale;
  const double cc1 = s * d.gaps[0] + slot_half_length(d.slots[0], s) + slot_half_length(d.slots[1], s);
  const double cc2 = s * d.gaps[1] + slot_half_length(d.slots[1], s) + slot_half_length(d.slots[2], s);
  const Vec3 center{0.5 * dims.nx, 0.5 * dims.ny, 0.5 * dims.nz};
  const std::array<double, 3> z{center.z - cc1, center.z, center.z + cc2};
  for (int b = 0; b < 3; ++b) {
    rigid::Body body;
    body.id = b;
    body.shape = slot_shape(d.slots[static_cast<std::size_t>(b)], s);
    body.mass = params.mass;
    body.position = Vec3{center.x, center.y, z[static_cast<std::size_t>(b)]};
    body.constraint = rigid::MotionConstraint::ZOnly;
    body.validate();
    sw.bodies.push_back(body);
  }

  // Keep a fluid layer between every body and the wall layer on each axis.
  for (const rigid::Body& b : sw.bodies) {
    const std::array<double, 3> p{b.position.x, b.position.y, b.position.z};
    const std::array<int, 3> n{dims.nx, dims.ny, dims.nz};
    const std::array<Vec3, 3> axes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    for (std::size_t ax = 0; ax < 3; ++ax) {
      const double h = b.half_extent(axes[ax]);
      if (p[ax] - h < 2.0 || p[ax] + h > n[ax] - 3.0) {
        std::ostringstream os;
        os << "design " << d.id << " does not fit in a " << dims.nx << "x" << dims.ny << "x" << dims.nz
           << " domain";
        throw OutOfDomain(os.str());
      }
    }
  }

  sw.springs.push_back({kLeft, kMiddle, params.stiffness, params.damping, Vec3{0.0, 0.0, -cc1}});
  sw.springs.push_back({kRight, kMiddle, params.stiffness, params.damping, Vec3{0.0, 0.0, cc2}});
  for (const rigid::Spring& sp : sw.springs) sp.validate();
  return sw;
}

int cycle_phase(const DriveProtocol& p, double t) {
  // Stages sit on eighth-period marks: (ii) at T/4, then one stage per T/8 up
  // to (ix) at 9T/8 and (x) at 5T/4, after which the cycle repeats from (iii).
  const auto m = static_cast<long long>(std::floor(8.0 * t / p.T + 1e-9));
  if (m < 2) return 1;
  if (m < 10) return static_cast<int>(m);
  const long long idx = (m - 2) % 8;
  return idx == 0 ? 10 : static_cast<int>(idx + 2);
}

std::string cycle_phase_label(int stage) {
  static const std::array<const char*, 10> labels{"(i)", "(ii)", "(iii)", "(iv)", "(v)",
                                                  "(vi)", "(vii)", "(viii)", "(ix)", "(x)"};
  if (stage < 1 || stage > 10) throw ValidationError("cycle stage out of range");
  return labels[static_cast<std::size_t>(stage - 1)];
}

}  // namespace tribead::swimmer
