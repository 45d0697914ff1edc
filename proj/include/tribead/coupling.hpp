#pragma once

// Explicit two-way coupling between the lattice and the rigid bodies.
//
// A coupled step runs: map bodies to flags, reconstruct vacated cells, fluid
// step (collide, boundaries, stream), collect hydrodynamic forces, add driving
// forces, then the rigid-body step with F = F_hydro + F_drive + F_spring.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tribead/lattice.hpp"
#include "tribead/rigid_body.hpp"
#include "tribead/swimmer.hpp"

namespace tribead::coupling {

struct Conversion {
  std::size_t cell = 0;
  int body = -1;  ///< new owner for fluid->obstacle, previous owner for obstacle->fluid
};

struct MappingResult {
  std::vector<Conversion> to_obstacle;
  std::vector<Conversion> to_fluid;
  std::size_t obstacle_cells = 0;
};

/// Flags every cell whose center lies inside a body as MovingObstacle(body
/// index) and releases cells no body covers any more. Throws OutOfDomain if a
/// body covers a wall cell or reaches outside the grid.
MappingResult map_bodies(lbm::Lattice& lattice, std::span<const rigid::Body> bodies);

/// Brute-force count of cells inside any body (independent of map_bodies).
[[nodiscard]] std::size_t count_inside(const lbm::Dims& dims, std::span<const rigid::Body> bodies);

/// Fills vacated cells with f_eq(rho_avg, u_w) where rho_avg averages the
/// surrounding fluid cells. Returns how many cells had no fluid neighbor and
/// fell back to the reference density.
std::size_t reconstruct_cells(lbm::Lattice& lattice, const MappingResult& mapping,
                              std::span<const rigid::Body> bodies);

/// Momentum exchanged with each body during the last fluid step.
[[nodiscard]] std::vector<Vec3> hydrodynamic_forces(const lbm::Lattice& lattice,
                                                    std::span<const rigid::Body> bodies);

enum class Phase { Map, Reconstruct, Fluid, Hydro, Drive, Rigid };

struct StepHooks {
  std::function<void(Phase)> on_phase;
  /// Use the separate collide/boundary/stream sweeps instead of the fused one.
  bool split_fluid = false;
};

struct StepReport {
  std::vector<Vec3> hydro;
  std::vector<Vec3> drive;
  std::vector<rigid::Overlap> overlaps;
  std::size_t fallback_cells = 0;
};

/// Advances fluid and bodies by one step at time t. `drive` may be null; it is
/// applied to bodies in swimmer order (B2, B1, B3). Errors carry the step index.
StepReport coupled_step(lbm::Lattice& lattice, std::span<rigid::Body> bodies, std::span<const rigid::Spring> springs,
                        const swimmer::DriveProtocol* drive, std::int64_t t, const StepHooks& hooks = {});

}  // namespace tribead::coupling
