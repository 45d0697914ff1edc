#include "tribead/rigid_body.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tribead/errors.hpp"

namespace tribead::rigid {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Distance from p to the segment [a, b].
double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

}  // namespace

void Body::validate() const {
  if (!(mass > 0.0)) throw ValidationError("body " + std::to_string(id) + ": mass must be positive");
  std::visit(Overloaded{
                 [this](const Sphere& s) {
                   if (!(s.radius > 0.0)) throw ValidationError("body " + std::to_string(id) + ": radius must be positive");
                 },
                 [this](const Capsule& c) {
                   if (!(c.radius > 0.0)) throw ValidationError("body " + std::to_string(id) + ": radius must be positive");
                   if (!(c.length >= 0.0)) throw ValidationError("body " + std::to_string(id) + ": negative capsule length");
                   if (std::abs(c.axis.norm() - 1.0) >= 1e-12) {
                     throw ValidationError("body " + std::to_string(id) + ": capsule axis must be unit length");
                   }
                 },
             },
             shape);
}

double Body::radius() const {
  return std::visit([](const auto& s) { return s.radius; }, shape);
}

double Body::half_extent(const Vec3& direction) const {
  return std::visit(Overloaded{
                        [](const Sphere& s) { return s.radius; },
                        [&direction](const Capsule& c) {
                          return c.radius + 0.5 * c.length * std::abs(c.axis.dot(direction));
                        },
                    },
                    shape);
}

bool Body::contains(const Vec3& point) const { return surface_distance(point) <= 0.0; }

double Body::surface_distance(const Vec3& point) const {
  return std::visit(Overloaded{
                        [&](const Sphere& s) { return (point - position).norm() - s.radius; },
                        [&](const Capsule& c) {
                          const Vec3 half = c.axis * (0.5 * c.length);
                          return segment_distance(point, position - half, position + half) - c.radius;
                        },
                    },
                    shape);
}

void Spring::validate() const {
  if (!(stiffness > 0.0)) throw ValidationError("spring stiffness must be positive");
  if (!(damping >= 0.0)) throw ValidationError("spring damping must be non-negative");
  if (body_i == body_j) throw ValidationError("spring must connect two distinct bodies");
}

SpringForce spring_force(const Spring& spring, const Body& bi, const Body& bj) {
  const Vec3 dx = (bi.position - bj.position) - spring.rest;
  const Vec3 du = bi.velocity - bj.velocity;
  const Vec3 on_i = -(dx * spring.stiffness) - du * spring.damping;
  return {on_i, -on_i};
}

std::vector<Vec3> spring_forces(std::span<const Body> bodies, std::span<const Spring> springs) {
  std::vector<Vec3> out(bodies.size());
  for (const Spring& s : springs) {
    const auto i = static_cast<std::size_t>(s.body_i);
    const auto j = static_cast<std::size_t>(s.body_j);
    if (i >= bodies.size() || j >= bodies.size()) throw ValidationError("spring references a missing body");
    const SpringForce f = spring_force(s, bodies[i], bodies[j]);
    out[i] += f.on_i;
    out[j] += f.on_j;
  }
  return out;
}

double damping_ratio(double mass, double stiffness, double damping) {
  if (!(mass > 0.0) || !(stiffness > 0.0)) throw ValidationError("damping ratio needs positive mass and stiffness");
  return damping / (2.0 * std::sqrt(mass * stiffness));
}

std::vector<Overlap> resolve_constraints(std::span<Body> bodies, std::span<const Spring> springs) {
  std::vector<Overlap> overlaps;
  // Contact detection only; bodies of a swimmer are kept apart by construction.
  for (std::size_t a = 0; a < bodies.size(); ++a) {
    for (std::size_t b = a + 1; b < bodies.size(); ++b) {
      const Vec3 d = bodies[b].position - bodies[a].position;
      const double dist = d.norm();
      if (dist == 0.0) {
        overlaps.push_back({bodies[a].id, bodies[b].id, bodies[a].radius() + bodies[b].radius()});
        continue;
      }
      const Vec3 dir = d * (1.0 / dist);
      const double reach = bodies[a].half_extent(dir) + bodies[b].half_extent(dir);
      if (dist < reach) overlaps.push_back({bodies[a].id, bodies[b].id, reach - dist});
    }
  }
  const std::vector<Vec3> f = spring_forces(bodies, springs);
  for (std::size_t i = 0; i < bodies.size(); ++i) bodies[i].force += f[i];
  return overlaps;
}

void integrate(std::span<Body> bodies, double dt) {
  for (Body& b : bodies) {
    Vec3 force = b.force;
    if (b.constraint == MotionConstraint::ZOnly) {
      force.x = 0.0;
      force.y = 0.0;
    }
    b.velocity += force * (dt / b.mass);
    b.position += b.velocity * dt;
    b.force = Vec3{};
    if (!b.position.finite() || !b.velocity.finite()) {
      std::ostringstream os;
      os << "body " << b.id << " reached a non-finite state";
      throw NonFiniteState(os.str());
    }
  }
}

double mechanical_energy(std::span<const Body> bodies, std::span<const Spring> springs) {
  double e = 0.0;
  for (const Body& b : bodies) e += 0.5 * b.mass * b.velocity.dot(b.velocity);
  for (const Spring& s : springs) {
    const Vec3 dx = (bodies[static_cast<std::size_t>(s.body_i)].position -
                     bodies[static_cast<std::size_t>(s.body_j)].position) -
                    s.rest;
    e += 0.5 * s.stiffness * dx.dot(dx);
  }
  return e;
}

std::string describe(const Shape& shape) {
  return std::visit(Overloaded{
                        [](const Sphere& s) {
                          std::ostringstream os;
                          os << "sphere(r=" << s.radius << ")";
                          return os.str();
                        },
                        [](const Capsule& c) {
                          std::ostringstream os;
                          os << "capsule(r=" << c.radius << ",l=" << c.length << ",axis=" << c.axis.x << ","
                             << c.axis.y << "," << c.axis.z << ")";
                          return os.str();
                        },
                    },
                    shape);
}

}  // namespace tribead::rigid
