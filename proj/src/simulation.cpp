#include "tribead/simulation.hpp"

#include <cmath>
#include <sstream>

#include "tribead/analysis.hpp"
#include "tribead/coupling.hpp"
#include "tribead/errors.hpp"
#include "tribead/units.hpp"

namespace tribead::sim {

namespace {

io::TrajectoryRecord snapshot(std::int64_t t, const std::vector<rigid::Body>& bodies) {
  io::TrajectoryRecord r;
  r.t = t;
  for (std::size_t b = 0; b < 3; ++b) {
    r.position[b] = bodies[b].position;
    r.uz[b] = bodies[b].velocity.z;
  }
  r.l1 = bodies[swimmer::kMiddle].position.z - bodies[swimmer::kLeft].position.z;
  r.l2 = bodies[swimmer::kRight].position.z - bodies[swimmer::kMiddle].position.z;
  return r;
}

void check_neutral(const swimmer::DriveForces& f, std::int64_t t) {
  if ((f.b2 + f.b3) + f.b1 != 0.0) {
    throw Error("driving forces do not cancel at step " + std::to_string(t));
  }
}

bool wants_row(long t, long steps, long stride) { return t % stride == 0 || t == steps; }

}  // namespace

io::Metadata metadata(const config::RunConfig& cfg) {
  using io::format_double;
  io::Metadata m;
  m["design"] = std::string(1, cfg.design);
  m["geometry_scale"] = format_double(cfg.geometry_scale);
  m["T"] = format_double(cfg.drive.T);
  m["phi"] = format_double(cfg.drive.phi);
  m["t1"] = format_double(cfg.drive.t1);
  m["t2"] = format_double(cfg.drive.t2);
  m["a"] = format_double(cfg.drive.a);
  m["tau"] = format_double(cfg.tau);
  m["viscosity"] = format_double((cfg.tau - 0.5) / 3.0);
  m["nx"] = std::to_string(cfg.dims.nx);
  m["ny"] = std::to_string(cfg.dims.ny);
  m["nz"] = std::to_string(cfg.dims.nz);
  m["steps"] = std::to_string(cfg.steps);
  return m;
}

std::vector<long> snapshot_schedule(const config::RunConfig& cfg) {
  std::vector<long> out;
  double end = 0.0;
  try {
    end = analysis::last_cycle_end(static_cast<double>(cfg.steps), cfg.drive.T, cfg.drive.t1);
  } catch (const InsufficientData&) {
    return out;
  }
  const auto begin = static_cast<long>(std::lround(end - cfg.drive.T));
  const long stop = std::lround(end);
  const long stride = cfg.output.field_stride > 0 ? cfg.output.field_stride : std::max(1L, std::lround(cfg.drive.T / 8.0));
  for (long t = begin; t < stop; t += stride) out.push_back(t);
  return out;
}

RunResult run_fluid(const config::RunConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  RunResult res;
  res.meta = metadata(cfg);

  lbm::Lattice lattice(cfg.dims, cfg.tau);
  lattice.set_box_walls();
  swimmer::Swimmer sw = swimmer::build_swimmer(swimmer::design(cfg.design), cfg.dims,
                                               {cfg.mass, cfg.stiffness, cfg.damping, cfg.geometry_scale});
  std::vector<long> shots;
  if (opt.keep_snapshots) shots = snapshot_schedule(cfg);
  std::size_t next_shot = 0;

  coupling::StepHooks hooks;
  hooks.split_fluid = opt.split_fluid;
  const long stride = cfg.output.trajectory_stride;
  std::array<double, 3> last_hydro{};
  for (long t = 0; t <= cfg.steps; ++t) {
    if (next_shot < shots.size() && shots[next_shot] == t) {
      res.snapshot_steps.push_back(t);
      res.snapshots.push_back(io::sample_field(lattice));
      ++next_shot;
    }
    const swimmer::DriveForces f = swimmer::driving_forces(cfg.drive, static_cast<double>(t));
    check_neutral(f, t);
    const bool row = wants_row(t, cfg.steps, stride);
    io::TrajectoryRecord rec;
    if (row) {
      rec = snapshot(t, sw.bodies);
      rec.f_drive = f.by_index();
    }
    if (t == cfg.steps) {
      if (row) {
        rec.f_hydro = last_hydro;
        res.records.push_back(rec);
      }
      break;
    }
    const coupling::StepReport rep = coupling::coupled_step(lattice, sw.bodies, sw.springs, &cfg.drive, t, hooks);
    for (std::size_t b = 0; b < 3; ++b) last_hydro[b] = rep.hydro[b].z;
    res.overlap_warnings += rep.overlaps.size();
    res.fallback_cells += rep.fallback_cells;
    if (row) {
      rec.f_hydro = last_hydro;
      res.records.push_back(rec);
    }
    res.steps_done = t + 1;
    if (opt.progress && opt.progress_every > 0 && (t + 1) % opt.progress_every == 0) opt.progress(t + 1);
  }
  return res;
}

RunResult run_vacuum(const config::RunConfig& cfg) {
  cfg.validate();
  RunResult res;
  res.meta = metadata(cfg);
  res.meta["mode"] = "vacuum";
  res.meta["l0"] = io::format_double(cfg.rest_length);

  std::vector<rigid::Body> bodies(3);
  for (int b = 0; b < 3; ++b) {
    auto& body = bodies[static_cast<std::size_t>(b)];
    body.id = b;
    body.shape = rigid::Sphere{swimmer::kSphereRadius};
    body.mass = cfg.mass;
    body.position = Vec3{0.0, 0.0, cfg.vacuum_x0[static_cast<std::size_t>(b)]};
  }
  const std::vector<rigid::Spring> springs{
      {swimmer::kLeft, swimmer::kMiddle, cfg.stiffness, cfg.damping, Vec3{0.0, 0.0, -cfg.rest_length}},
      {swimmer::kRight, swimmer::kMiddle, cfg.stiffness, cfg.damping, Vec3{0.0, 0.0, cfg.rest_length}},
  };
  const long stride = cfg.output.trajectory_stride;
  for (long t = 0; t <= cfg.steps; ++t) {
    const swimmer::DriveForces f = swimmer::driving_forces(cfg.drive, static_cast<double>(t));
    check_neutral(f, t);
    if (wants_row(t, cfg.steps, stride)) {
      io::TrajectoryRecord rec = snapshot(t, bodies);
      rec.f_drive = f.by_index();
      res.records.push_back(rec);
    }
    if (t == cfg.steps) break;
    const auto fz = f.by_index();
    for (std::size_t b = 0; b < 3; ++b) bodies[b].force += Vec3{0.0, 0.0, fz[b]};
    rigid::resolve_constraints(bodies, springs);
    rigid::integrate(bodies);
    res.steps_done = t + 1;
  }
  return res;
}

std::string run_log_header(const config::RunConfig& cfg) {
  std::ostringstream os;
  os << "# resolved configuration\n" << config::to_text(cfg);
  const units::PhysicalParams phys;
  os << "\n" << units::conversion_table(phys, units::unit_bridge(phys));
  return os.str();
}

}  // namespace tribead::sim
