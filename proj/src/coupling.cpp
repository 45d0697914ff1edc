#include "tribead/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "tribead/errors.hpp"

namespace tribead::coupling {

namespace {

struct Box {
  std::array<int, 3> lo;
  std::array<int, 3> hi;
};

Box bounding_box(const rigid::Body& b) {
  const std::array<Vec3, 3> axes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  const std::array<double, 3> p{b.position.x, b.position.y, b.position.z};
  Box box{};
  for (std::size_t d = 0; d < 3; ++d) {
    const double h = b.half_extent(axes[d]);
    box.lo[d] = static_cast<int>(std::ceil(p[d] - h));
    box.hi[d] = static_cast<int>(std::floor(p[d] + h));
  }
  return box;
}

// Visits every integer cell center inside the body, in or out of the grid.
template <class Fn>
void for_each_inside(const rigid::Body& b, Fn&& fn) {
  const Box box = bounding_box(b);
  for (int k = box.lo[2]; k <= box.hi[2]; ++k) {
    for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
      for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
        if (b.contains(Vec3{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)})) fn(i, j, k);
      }
    }
  }
}

template <class E>
[[noreturn]] void rethrow_at_step(const E& e, std::int64_t t) {
  throw E("step " + std::to_string(t) + ": " + e.what());
}

}  // namespace

MappingResult map_bodies(lbm::Lattice& lattice, std::span<const rigid::Body> bodies) {
  std::vector<Conversion> wanted;
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    for_each_inside(bodies[b], [&](int i, int j, int k) {
      if (!lattice.contains(i, j, k) || lattice.flag_code(lattice.index(i, j, k)) == lbm::Lattice::kWallCode) {
        std::ostringstream os;
        os << "body " << bodies[b].id << " covers cell (" << i << "," << j << "," << k
           << ") on or outside the wall layer";
        throw OutOfDomain(os.str());
      }
      wanted.push_back({lattice.index(i, j, k), static_cast<int>(b)});
    });
  }
  // First body wins where two bodies claim the same cell.
  std::stable_sort(wanted.begin(), wanted.end(), [](const Conversion& x, const Conversion& y) { return x.cell < y.cell; });
  wanted.erase(std::unique(wanted.begin(), wanted.end(),
                           [](const Conversion& x, const Conversion& y) { return x.cell == y.cell; }),
               wanted.end());

  MappingResult result;
  const std::size_t n = lattice.cells();
  for (std::size_t c = 0; c < n; ++c) {
    const std::int32_t code = lattice.flag_code(c);
    if (code < 0) continue;
    const auto it = std::lower_bound(wanted.begin(), wanted.end(), c,
                                     [](const Conversion& x, std::size_t cell) { return x.cell < cell; });
    if (it == wanted.end() || it->cell != c) {
      result.to_fluid.push_back({c, code});
      lattice.set_flag(c, lbm::CellFlag::fluid());
    }
  }
  for (const Conversion& w : wanted) {
    if (lattice.is_fluid(w.cell)) result.to_obstacle.push_back(w);
    lattice.set_flag(w.cell, lbm::CellFlag::obstacle(w.body));
  }
  result.obstacle_cells = wanted.size();
  return result;
}

std::size_t count_inside(const lbm::Dims& dims, std::span<const rigid::Body> bodies) {
  std::size_t count = 0;
  for (int k = 0; k < dims.nz; ++k) {
    for (int j = 0; j < dims.ny; ++j) {
      for (int i = 0; i < dims.nx; ++i) {
        const Vec3 c{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)};
        if (std::any_of(bodies.begin(), bodies.end(), [&](const rigid::Body& b) { return b.contains(c); })) ++count;
      }
    }
  }
  return count;
}

std::size_t reconstruct_cells(lbm::Lattice& lattice, const MappingResult& mapping,
                              std::span<const rigid::Body> bodies) {
  std::vector<std::size_t> fresh;
  fresh.reserve(mapping.to_fluid.size());
  for (const Conversion& c : mapping.to_fluid) fresh.push_back(c.cell);
  std::sort(fresh.begin(), fresh.end());

  std::size_t fallbacks = 0;
  for (const Conversion& conv : mapping.to_fluid) {
    double sum = 0.0;
    int count = 0;
    for (int a = 1; a < lbm::kQ; ++a) {
      const std::int64_t nb = lattice.neighbor(conv.cell, a);
      if (nb < 0) continue;
      const auto cell = static_cast<std::size_t>(nb);
      if (!lattice.is_fluid(cell) || std::binary_search(fresh.begin(), fresh.end(), cell)) continue;
      double rho = 0.0;
      for (int b = 0; b < lbm::kQ; ++b) rho += lattice.f(cell, b);
      sum += rho;
      ++count;
    }
    double rho_avg = lbm::kRhoRef;
    if (count > 0) {
      rho_avg = sum / count;
    } else {
      ++fallbacks;
      std::clog << "warning: vacated cell " << conv.cell << " has no fluid neighbor, using reference density\n";
    }
    const Vec3 uw = bodies[static_cast<std::size_t>(conv.body)].velocity;
    lattice.set_equilibrium(conv.cell, rho_avg, uw);
  }
  return fallbacks;
}

std::vector<Vec3> hydrodynamic_forces(const lbm::Lattice& lattice, std::span<const rigid::Body> bodies) {
  std::vector<Vec3> out(bodies.size());
  const auto h = lattice.hydro_forces();
  for (std::size_t b = 0; b < out.size() && b < h.size(); ++b) out[b] = h[b];
  return out;
}

StepReport coupled_step(lbm::Lattice& lattice, std::span<rigid::Body> bodies, std::span<const rigid::Spring> springs,
                        const swimmer::DriveProtocol* drive, std::int64_t t, const StepHooks& hooks) {
  auto phase = [&](Phase p) {
    if (hooks.on_phase) hooks.on_phase(p);
  };
  StepReport report;
  try {
    phase(Phase::Map);
    const MappingResult mapping = map_bodies(lattice, bodies);

    phase(Phase::Reconstruct);
    report.fallback_cells = reconstruct_cells(lattice, mapping, bodies);

    phase(Phase::Fluid);
    std::vector<Vec3> wall_velocity(bodies.size());
    for (std::size_t b = 0; b < bodies.size(); ++b) wall_velocity[b] = bodies[b].velocity;
    if (hooks.split_fluid) {
      lbm::collide(lattice);
      lbm::bounce_back_wall(lattice);
      lbm::moving_boundary(lattice, wall_velocity);
      lbm::stream(lattice);
    } else {
      lbm::fused_step(lattice, wall_velocity);
    }

    phase(Phase::Hydro);
    report.hydro = hydrodynamic_forces(lattice, bodies);
    for (std::size_t b = 0; b < bodies.size(); ++b) bodies[b].force += report.hydro[b];

    phase(Phase::Drive);
    report.drive.assign(bodies.size(), Vec3{});
    if (drive != nullptr && bodies.size() == 3) {
      const auto f = swimmer::driving_forces(*drive, static_cast<double>(t)).by_index();
      for (std::size_t b = 0; b < 3; ++b) {
        report.drive[b] = Vec3{0.0, 0.0, f[b]};
        bodies[b].force += report.drive[b];
      }
    }

    phase(Phase::Rigid);
    report.overlaps = rigid::resolve_constraints(bodies, springs);
    rigid::integrate(bodies);
  } catch (const StabilityError& e) {
    rethrow_at_step(e, t);
  } catch (const NonFiniteState& e) {
    rethrow_at_step(e, t);
  } catch (const OutOfDomain& e) {
    rethrow_at_step(e, t);
  } catch (const DegenerateDensity& e) {
    rethrow_at_step(e, t);
  }
  return report;
}

}  // namespace tribead::coupling
