#pragma once

// D3Q19 LBGK fluid solver in lattice units (dx = dt = 1).
//
// Populations are stored structure-of-arrays: f[alpha * cells + cell], with
// cell = i + nx * (j + ny * k). One step is collide -> boundaries -> stream:
// collision relaxes in place, boundary links reflect post-collision values
// into the back buffer, streaming pushes fluid-to-fluid links into the back
// buffer and swaps. `fused_step` performs the same arithmetic in one sweep.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tribead/vec3.hpp"

namespace tribead::lbm {

inline constexpr int kQ = 19;

/// Discrete velocities: rest, 6 axis links, 12 face diagonals. Opposite
/// directions are adjacent (1<->2, 3<->4, ...).
inline constexpr std::array<std::array<int, 3>, kQ> kE{{
    {0, 0, 0},
    {1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0}, {0, 0, 1},  {0, 0, -1},
    {1, 1, 0},  {-1, -1, 0}, {1, -1, 0}, {-1, 1, 0},
    {1, 0, 1},  {-1, 0, -1}, {1, 0, -1}, {-1, 0, 1},
    {0, 1, 1},  {0, -1, -1}, {0, 1, -1}, {0, -1, 1},
}};

inline constexpr std::array<double, kQ> kW{
    1.0 / 3.0,
    1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0,
    1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0,
    1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0,
    1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0,
};

inline constexpr std::array<int, kQ> kOpposite{0, 2, 1, 4, 3, 6, 5, 8, 7, 10, 9,
                                               12, 11, 14, 13, 16, 15, 18, 17};

inline constexpr double kRhoRef = 1.0;

/// Populations below this are treated as a stability failure.
inline constexpr double kNegativeTolerance = -1e-12;

/// Second-order LBGK equilibrium w (rho (1 + 3 e.u + 4.5 (e.u)^2 - 1.5 u.u)).
[[nodiscard]] inline double equilibrium(double rho, const Vec3& u, int alpha) {
  const auto& e = kE[static_cast<std::size_t>(alpha)];
  const double eu = e[0] * u.x + e[1] * u.y + e[2] * u.z;
  const double uu = u.dot(u);
  return kW[static_cast<std::size_t>(alpha)] * rho * (1.0 + 3.0 * eu + 4.5 * eu * eu - 1.5 * uu);
}

struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  [[nodiscard]] std::size_t cells() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct CellFlag {
  enum class Kind : std::uint8_t { Fluid, NoSlipWall, MovingObstacle };

  Kind kind = Kind::Fluid;
  int body = -1;  ///< owning body for MovingObstacle, -1 otherwise

  static constexpr CellFlag fluid() { return {Kind::Fluid, -1}; }
  static constexpr CellFlag wall() { return {Kind::NoSlipWall, -1}; }
  static constexpr CellFlag obstacle(int body_id) { return {Kind::MovingObstacle, body_id}; }

  friend bool operator==(const CellFlag&, const CellFlag&) = default;
};

struct Moments {
  double rho = 0.0;
  Vec3 u;
};

struct CellCoord {
  int i = 0;
  int j = 0;
  int k = 0;
};

class Lattice {
 public:
  /// Packed flag codes; values >= 0 are body ids.
  static constexpr std::int32_t kFluidCode = -1;
  static constexpr std::int32_t kWallCode = -2;

  Lattice(Dims dims, double tau, std::array<bool, 3> periodic = {false, false, false});

  [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t cells() const noexcept { return cells_; }
  [[nodiscard]] double tau() const noexcept { return tau_; }
  [[nodiscard]] double viscosity() const noexcept { return (tau_ - 0.5) / 3.0; }
  [[nodiscard]] const std::array<bool, 3>& periodic() const noexcept { return periodic_; }
  [[nodiscard]] std::int64_t step_index() const noexcept { return step_; }
  void set_step_index(std::int64_t s) noexcept { step_ = s; }

  [[nodiscard]] std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.nx) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(k));
  }
  [[nodiscard]] CellCoord coords(std::size_t cell) const noexcept;
  [[nodiscard]] bool contains(int i, int j, int k) const noexcept {
    return i >= 0 && j >= 0 && k >= 0 && i < dims_.nx && j < dims_.ny && k < dims_.nz;
  }

  /// Neighbor across link alpha, wrapping periodic axes; -1 if it leaves the domain.
  [[nodiscard]] std::int64_t neighbor(std::size_t cell, int alpha) const noexcept;
  [[nodiscard]] std::int64_t neighbor(const CellCoord& c, int alpha) const noexcept;

  // Population access (front buffer = current state).
  [[nodiscard]] double f(std::size_t cell, int alpha) const noexcept {
    return f_[static_cast<std::size_t>(alpha) * cells_ + cell];
  }
  void set_f(std::size_t cell, int alpha, double v) noexcept {
    f_[static_cast<std::size_t>(alpha) * cells_ + cell] = v;
  }
  [[nodiscard]] double back(std::size_t cell, int alpha) const noexcept {
    return f_tmp_[static_cast<std::size_t>(alpha) * cells_ + cell];
  }
  void set_back(std::size_t cell, int alpha, double v) noexcept {
    f_tmp_[static_cast<std::size_t>(alpha) * cells_ + cell] = v;
  }
  [[nodiscard]] std::span<const double> front_buffer() const noexcept { return f_; }
  [[nodiscard]] std::span<const double> back_buffer() const noexcept { return f_tmp_; }
  void swap_buffers() noexcept { f_.swap(f_tmp_); }

  /// Fill cell with f_eq(rho, u).
  void set_equilibrium(std::size_t cell, double rho, const Vec3& u);
  /// Fill every cell (including non-fluid) with f_eq(rho, u).
  void init_equilibrium(double rho, const Vec3& u);

  // Flags.
  [[nodiscard]] CellFlag flag(std::size_t cell) const noexcept;
  [[nodiscard]] std::int32_t flag_code(std::size_t cell) const noexcept { return flags_[cell]; }
  [[nodiscard]] bool is_fluid(std::size_t cell) const noexcept { return flags_[cell] == kFluidCode; }
  void set_flag(std::size_t cell, CellFlag flag);
  /// Mark the outermost cell layer of every non-periodic axis as NoSlipWall.
  void set_box_walls();
  [[nodiscard]] std::size_t count_flags(CellFlag::Kind kind) const;

  /// True when the cell is fluid, off the domain edge, and all 18 neighbors are fluid.
  [[nodiscard]] bool is_bulk(std::size_t cell) const noexcept { return bulk_[cell] != 0; }

  /// Uniform body acceleration applied through a second-order forcing term.
  void set_body_acceleration(const Vec3& g) noexcept { accel_ = g; }
  [[nodiscard]] const Vec3& body_acceleration() const noexcept { return accel_; }

  /// Momentum exchanged with each body during the last boundary pass.
  [[nodiscard]] std::span<const Vec3> hydro_forces() const noexcept { return hydro_; }
  void reset_hydro_forces(std::size_t bodies);
  void add_hydro_force(int body, const Vec3& f);

  /// Sum of all populations over fluid cells, fixed order.
  [[nodiscard]] double total_mass() const;

 private:
  void refresh_bulk(std::size_t cell);
  void refresh_bulk_all();
  [[nodiscard]] bool compute_bulk(std::size_t cell) const;

  Dims dims_;
  std::size_t cells_;
  double tau_;
  std::array<bool, 3> periodic_;
  std::int64_t step_ = 0;
  std::vector<double> f_;
  std::vector<double> f_tmp_;
  std::vector<std::int32_t> flags_;
  std::vector<std::uint8_t> bulk_;
  Vec3 accel_;
  std::vector<Vec3> hydro_;

  friend void fused_step(Lattice&, std::span<const Vec3>);
};

/// Zeroth and first moments of a fluid cell. Throws DegenerateDensity if rho <= 0.
[[nodiscard]] Moments macroscopic(const Lattice& lattice, std::size_t cell);

/// LBGK relaxation of every fluid cell, in place. Throws StabilityError on negative output.
void collide(Lattice& lattice);

/// Reflect post-collision populations at NoSlipWall links into the back buffer.
void bounce_back_wall(Lattice& lattice);

/// Reflect at MovingObstacle links with the moving-wall correction and
/// accumulate the exchanged momentum per body. `wall_velocity[b]` is the
/// translational velocity of body b.
void moving_boundary(Lattice& lattice, std::span<const Vec3> wall_velocity);

/// Push fluid-to-fluid links (and rest populations) into the back buffer, then swap.
void stream(Lattice& lattice);

/// collide -> bounce_back_wall -> moving_boundary -> stream in a single sweep;
/// bit-identical to calling them in sequence.
void fused_step(Lattice& lattice, std::span<const Vec3> wall_velocity);

}  // namespace tribead::lbm
