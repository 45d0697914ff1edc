#include "tribead/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "tribead/errors.hpp"

namespace tribead::lbm {

namespace {

constexpr std::size_t Q = kQ;

struct Relaxation {
  double omega;
  double source_scale;  // 1 - omega / 2
  Vec3 accel;
  bool forced;
};

Relaxation make_relaxation(const Lattice& lattice) {
  const double omega = 1.0 / lattice.tau();
  const Vec3& g = lattice.body_acceleration();
  return {omega, 1.0 - 0.5 * omega, g, g.x != 0.0 || g.y != 0.0 || g.z != 0.0};
}

constexpr std::array<double, Q> make_component(int d) {
  std::array<double, Q> out{};
  for (std::size_t a = 0; a < Q; ++a) out[a] = static_cast<double>(kE[a][static_cast<std::size_t>(d)]);
  return out;
}
constexpr std::array<double, Q> kEx = make_component(0);
constexpr std::array<double, Q> kEy = make_component(1);
constexpr std::array<double, Q> kEz = make_component(2);

// Relaxes one x-row of cells. `src` points at population 0 of the first cell,
// consecutive populations are `stride` apart. Both the split and the fused
// sweeps go through here, so they produce identical bits.
struct RowScratch {
  explicit RowScratch(std::size_t len)
      : rho(len), ux(len), uy(len), uz(len), base(len), fx(len), fy(len), fz(len), out(Q * len), lo(len) {}
  std::vector<double> rho, ux, uy, uz, base, fx, fy, fz;
  std::vector<double> out;  // out[a * len + i]
  std::vector<double> lo;
};

template <bool Forced>
void relax_row_impl(const double* src, std::size_t stride, std::size_t len, const Relaxation& r, RowScratch& s) {
  double* rho = s.rho.data();
  double* ux = s.ux.data();
  double* uy = s.uy.data();
  double* uz = s.uz.data();
  double* base = s.base.data();
  double* fx = s.fx.data();
  double* fy = s.fy.data();
  double* fz = s.fz.data();
  for (std::size_t i = 0; i < len; ++i) {
    rho[i] = 0.0;
    ux[i] = 0.0;
    uy[i] = 0.0;
    uz[i] = 0.0;
  }
  for (std::size_t a = 0; a < Q; ++a) {
    const double* in = src + a * stride;
    const double ex = kEx[a];
    const double ey = kEy[a];
    const double ez = kEz[a];
    for (std::size_t i = 0; i < len; ++i) {
      rho[i] += in[i];
      ux[i] += in[i] * ex;
      uy[i] += in[i] * ey;
      uz[i] += in[i] * ez;
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    if constexpr (Forced) {
      fx[i] = r.accel.x * rho[i];
      fy[i] = r.accel.y * rho[i];
      fz[i] = r.accel.z * rho[i];
      ux[i] += 0.5 * fx[i];
      uy[i] += 0.5 * fy[i];
      uz[i] += 0.5 * fz[i];
    }
    const double inv_rho = 1.0 / rho[i];
    ux[i] *= inv_rho;
    uy[i] *= inv_rho;
    uz[i] *= inv_rho;
    base[i] = 1.0 - 1.5 * (ux[i] * ux[i] + uy[i] * uy[i] + uz[i] * uz[i]);
  }
  const double omega = r.omega;
  for (std::size_t a = 0; a < Q; ++a) {
    const double* in = src + a * stride;
    double* out = s.out.data() + a * len;
    const double ex = kEx[a];
    const double ey = kEy[a];
    const double ez = kEz[a];
    const double w = kW[a];
    for (std::size_t i = 0; i < len; ++i) {
      const double eu = ex * ux[i] + ey * uy[i] + ez * uz[i];
      const double feq = w * rho[i] * (base[i] + 3.0 * eu + 4.5 * eu * eu);
      double v = in[i] + omega * (feq - in[i]);
      if constexpr (Forced) {
        const double gx = 3.0 * (ex - ux[i]) + 9.0 * eu * ex;
        const double gy = 3.0 * (ey - uy[i]) + 9.0 * eu * ey;
        const double gz = 3.0 * (ez - uz[i]) + 9.0 * eu * ez;
        v += r.source_scale * w * (gx * fx[i] + gy * fy[i] + gz * fz[i]);
      }
      out[i] = v;
    }
  }
  double* lo = s.lo.data();
  for (std::size_t i = 0; i < len; ++i) lo[i] = s.out[i];
  for (std::size_t a = 1; a < Q; ++a) {
    const double* out = s.out.data() + a * len;
    for (std::size_t i = 0; i < len; ++i) lo[i] = std::min(lo[i], out[i]);
  }
}

void relax_row(const double* src, std::size_t stride, std::size_t len, const Relaxation& r, RowScratch& s) {
  if (r.forced) {
    relax_row_impl<true>(src, stride, len, r, s);
  } else {
    relax_row_impl<false>(src, stride, len, r, s);
  }
}

[[noreturn]] void throw_negative(const Lattice& lattice, std::size_t cell, int alpha, double value,
                                 const char* where) {
  const CellCoord c = lattice.coords(cell);
  std::ostringstream os;
  os << "negative population " << value << " after " << where << " at cell (" << c.i << "," << c.j << "," << c.k
     << ") direction " << alpha << " step " << lattice.step_index();
  throw StabilityError(os.str());
}

void check_row(const Lattice& lattice, std::size_t c0, const RowScratch& s, std::size_t len, const char* where) {
  for (std::size_t i = 0; i < len; ++i) {
    const double lo = s.lo[i];
    if ((lo < kNegativeTolerance || !(lo == lo)) && lattice.is_fluid(c0 + i)) {
      for (std::size_t a = 0; a < Q; ++a) {
        const double v = s.out[a * len + i];
        if (v < kNegativeTolerance || !(v == v)) throw_negative(lattice, c0 + i, static_cast<int>(a), v, where);
      }
    }
  }
}

inline double moving_correction(std::size_t alpha, double rho_w, const Vec3& uw) {
  const auto& eo = kE[static_cast<std::size_t>(kOpposite[alpha])];
  return 6.0 * kW[alpha] * rho_w * (eo[0] * uw.x + eo[1] * uw.y + eo[2] * uw.z);
}

inline Vec3 link_vector(std::size_t alpha) {
  return {static_cast<double>(kE[alpha][0]), static_cast<double>(kE[alpha][1]), static_cast<double>(kE[alpha][2])};
}

}  // namespace

Lattice::Lattice(Dims dims, double tau, std::array<bool, 3> periodic)
    : dims_(dims), cells_(dims.cells()), tau_(tau), periodic_(periodic) {
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) throw ValidationError("lattice dimensions must be positive");
  if (!(tau > 0.5)) throw ValidationError("relaxation time tau must exceed 0.5");
  f_.assign(cells_ * Q, 0.0);
  f_tmp_.assign(cells_ * Q, 0.0);
  flags_.assign(cells_, kFluidCode);
  bulk_.assign(cells_, 0);
  init_equilibrium(kRhoRef, Vec3{});
  f_tmp_ = f_;
  refresh_bulk_all();
}

CellCoord Lattice::coords(std::size_t cell) const noexcept {
  const auto nx = static_cast<std::size_t>(dims_.nx);
  const auto ny = static_cast<std::size_t>(dims_.ny);
  return {static_cast<int>(cell % nx), static_cast<int>((cell / nx) % ny), static_cast<int>(cell / (nx * ny))};
}

std::int64_t Lattice::neighbor(std::size_t cell, int alpha) const noexcept { return neighbor(coords(cell), alpha); }

std::int64_t Lattice::neighbor(const CellCoord& c, int alpha) const noexcept {
  const auto& e = kE[static_cast<std::size_t>(alpha)];
  std::array<int, 3> p{c.i + e[0], c.j + e[1], c.k + e[2]};
  const std::array<int, 3> n{dims_.nx, dims_.ny, dims_.nz};
  for (std::size_t d = 0; d < 3; ++d) {
    if (p[d] < 0 || p[d] >= n[d]) {
      if (!periodic_[d]) return -1;
      p[d] = (p[d] + n[d]) % n[d];
    }
  }
  return static_cast<std::int64_t>(index(p[0], p[1], p[2]));
}

void Lattice::set_equilibrium(std::size_t cell, double rho, const Vec3& u) {
  for (int a = 0; a < kQ; ++a) set_f(cell, a, equilibrium(rho, u, a));
}

void Lattice::init_equilibrium(double rho, const Vec3& u) {
  for (std::size_t a = 0; a < Q; ++a) {
    const double v = equilibrium(rho, u, static_cast<int>(a));
    std::fill_n(f_.begin() + static_cast<std::ptrdiff_t>(a * cells_), cells_, v);
  }
}

CellFlag Lattice::flag(std::size_t cell) const noexcept {
  const std::int32_t code = flags_[cell];
  if (code == kFluidCode) return CellFlag::fluid();
  if (code == kWallCode) return CellFlag::wall();
  return CellFlag::obstacle(code);
}

void Lattice::set_flag(std::size_t cell, CellFlag flag) {
  std::int32_t code = kFluidCode;
  switch (flag.kind) {
    case CellFlag::Kind::Fluid:
      code = kFluidCode;
      break;
    case CellFlag::Kind::NoSlipWall:
      code = kWallCode;
      break;
    case CellFlag::Kind::MovingObstacle:
      if (flag.body < 0) throw ValidationError("moving obstacle cell needs a body id");
      code = flag.body;
      break;
  }
  if (flags_[cell] == code) return;
  flags_[cell] = code;
  refresh_bulk(cell);
}

void Lattice::set_box_walls() {
  for (int k = 0; k < dims_.nz; ++k) {
    for (int j = 0; j < dims_.ny; ++j) {
      for (int i = 0; i < dims_.nx; ++i) {
        const bool edge = (!periodic_[0] && (i == 0 || i == dims_.nx - 1)) ||
                          (!periodic_[1] && (j == 0 || j == dims_.ny - 1)) ||
                          (!periodic_[2] && (k == 0 || k == dims_.nz - 1));
        if (edge) flags_[index(i, j, k)] = kWallCode;
      }
    }
  }
  refresh_bulk_all();
}

std::size_t Lattice::count_flags(CellFlag::Kind kind) const {
  return static_cast<std::size_t>(std::count_if(flags_.begin(), flags_.end(), [kind](std::int32_t code) {
    switch (kind) {
      case CellFlag::Kind::Fluid:
        return code == kFluidCode;
      case CellFlag::Kind::NoSlipWall:
        return code == kWallCode;
      case CellFlag::Kind::MovingObstacle:
        return code >= 0;
    }
    return false;
  }));
}

bool Lattice::compute_bulk(std::size_t cell) const {
  if (flags_[cell] != kFluidCode) return false;
  const CellCoord c = coords(cell);
  if (c.i == 0 || c.j == 0 || c.k == 0 || c.i == dims_.nx - 1 || c.j == dims_.ny - 1 || c.k == dims_.nz - 1) {
    return false;
  }
  for (std::size_t a = 1; a < Q; ++a) {
    const std::size_t n = index(c.i + kE[a][0], c.j + kE[a][1], c.k + kE[a][2]);
    if (flags_[n] != kFluidCode) return false;
  }
  return true;
}

void Lattice::refresh_bulk(std::size_t cell) {
  bulk_[cell] = compute_bulk(cell) ? 1 : 0;
  for (std::size_t a = 1; a < Q; ++a) {
    const std::int64_t n = neighbor(cell, static_cast<int>(a));
    if (n >= 0) bulk_[static_cast<std::size_t>(n)] = compute_bulk(static_cast<std::size_t>(n)) ? 1 : 0;
  }
}

void Lattice::refresh_bulk_all() {
  for (std::size_t c = 0; c < cells_; ++c) bulk_[c] = compute_bulk(c) ? 1 : 0;
}

void Lattice::reset_hydro_forces(std::size_t bodies) { hydro_.assign(bodies, Vec3{}); }

void Lattice::add_hydro_force(int body, const Vec3& f) {
  if (static_cast<std::size_t>(body) >= hydro_.size()) hydro_.resize(static_cast<std::size_t>(body) + 1);
  hydro_[static_cast<std::size_t>(body)] += f;
}

double Lattice::total_mass() const {
  double sum = 0.0;
  for (std::size_t c = 0; c < cells_; ++c) {
    if (flags_[c] != kFluidCode) continue;
    for (std::size_t a = 0; a < Q; ++a) sum += f_[a * cells_ + c];
  }
  return sum;
}

Moments macroscopic(const Lattice& lattice, std::size_t cell) {
  double rho = 0.0;
  Vec3 j;
  for (int a = 0; a < kQ; ++a) {
    const double v = lattice.f(cell, a);
    const auto& e = kE[static_cast<std::size_t>(a)];
    rho += v;
    j += Vec3{v * e[0], v * e[1], v * e[2]};
  }
  if (!(rho > 0.0)) {
    const CellCoord c = lattice.coords(cell);
    std::ostringstream os;
    os << "non-positive density " << rho << " at cell (" << c.i << "," << c.j << "," << c.k << ")";
    throw DegenerateDensity(os.str());
  }
  j += lattice.body_acceleration() * (0.5 * rho);
  return {rho, j * (1.0 / rho)};
}

void collide(Lattice& lattice) {
  const Relaxation r = make_relaxation(lattice);
  const std::size_t n = lattice.cells();
  const auto len = static_cast<std::size_t>(lattice.dims().nx);
  RowScratch scratch(len);
  std::vector<double> row(Q * len);
  for (std::size_t c0 = 0; c0 < n; c0 += len) {
    for (std::size_t a = 0; a < Q; ++a) {
      for (std::size_t i = 0; i < len; ++i) row[a * len + i] = lattice.f(c0 + i, static_cast<int>(a));
    }
    relax_row(row.data(), len, len, r, scratch);
    check_row(lattice, c0, scratch, len, "collision");
    for (std::size_t i = 0; i < len; ++i) {
      if (!lattice.is_fluid(c0 + i)) continue;
      for (std::size_t a = 0; a < Q; ++a) lattice.set_f(c0 + i, static_cast<int>(a), scratch.out[a * len + i]);
    }
  }
}

void bounce_back_wall(Lattice& lattice) {
  const std::size_t n = lattice.cells();
  for (std::size_t c = 0; c < n; ++c) {
    if (!lattice.is_fluid(c) || lattice.is_bulk(c)) continue;
    for (std::size_t a = 1; a < Q; ++a) {
      const std::int64_t nb = lattice.neighbor(c, static_cast<int>(a));
      if (nb < 0 || lattice.flag_code(static_cast<std::size_t>(nb)) == Lattice::kWallCode) {
        lattice.set_back(c, kOpposite[a], lattice.f(c, static_cast<int>(a)));
      }
    }
  }
}

void moving_boundary(Lattice& lattice, std::span<const Vec3> wall_velocity) {
  lattice.reset_hydro_forces(wall_velocity.size());
  const std::size_t n = lattice.cells();
  for (std::size_t c = 0; c < n; ++c) {
    if (!lattice.is_fluid(c) || lattice.is_bulk(c)) continue;
    bool have_rho = false;
    double rho_w = 0.0;
    for (std::size_t a = 1; a < Q; ++a) {
      const std::int64_t nb = lattice.neighbor(c, static_cast<int>(a));
      if (nb < 0) continue;
      const std::int32_t body = lattice.flag_code(static_cast<std::size_t>(nb));
      if (body < 0) continue;
      if (!have_rho) {
        for (std::size_t b = 0; b < Q; ++b) rho_w += lattice.f(c, static_cast<int>(b));
        have_rho = true;
      }
      const double post = lattice.f(c, static_cast<int>(a));
      const double corr = moving_correction(a, rho_w, wall_velocity[static_cast<std::size_t>(body)]);
      const double reflected = post + corr;
      if (reflected < kNegativeTolerance) throw_negative(lattice, c, kOpposite[a], reflected, "moving boundary");
      lattice.set_back(c, kOpposite[a], reflected);
      lattice.add_hydro_force(body, link_vector(a) * (2.0 * post + corr));
    }
  }
}

void stream(Lattice& lattice) {
  const std::size_t n = lattice.cells();
  for (std::size_t c = 0; c < n; ++c) {
    if (!lattice.is_fluid(c)) continue;
    lattice.set_back(c, 0, lattice.f(c, 0));
    for (std::size_t a = 1; a < Q; ++a) {
      const std::int64_t nb = lattice.neighbor(c, static_cast<int>(a));
      if (nb >= 0 && lattice.is_fluid(static_cast<std::size_t>(nb))) {
        lattice.set_back(static_cast<std::size_t>(nb), static_cast<int>(a), lattice.f(c, static_cast<int>(a)));
      }
    }
  }
  lattice.swap_buffers();
  lattice.set_step_index(lattice.step_index() + 1);
}

void fused_step(Lattice& lattice, std::span<const Vec3> wall_velocity) {
  const Relaxation r = make_relaxation(lattice);
  const std::size_t n = lattice.cells();
  const auto len = static_cast<std::size_t>(lattice.dims().nx);
  const double* src = lattice.f_.data();
  double* dst = lattice.f_tmp_.data();
  const std::int32_t* flags = lattice.flags_.data();
  const std::uint8_t* bulk = lattice.bulk_.data();

  std::array<std::ptrdiff_t, Q> shift{};
  const auto nx = static_cast<std::ptrdiff_t>(lattice.dims().nx);
  const auto nxy = nx * static_cast<std::ptrdiff_t>(lattice.dims().ny);
  for (std::size_t a = 0; a < Q; ++a) shift[a] = kE[a][0] + kE[a][1] * nx + kE[a][2] * nxy;
  lattice.reset_hydro_forces(wall_velocity.size());

  const int nxi = lattice.dims().nx;
  const int nyi = lattice.dims().ny;
  const int nzi = lattice.dims().nz;
  RowScratch scratch(len);
  const double* out = scratch.out.data();
  for (std::size_t c0 = 0; c0 < n; c0 += len) {
    bool any_fluid = false;
    for (std::size_t i = 0; i < len; ++i) any_fluid = any_fluid || flags[c0 + i] == Lattice::kFluidCode;
    if (!any_fluid) continue;

    relax_row(src + c0, n, len, r, scratch);
    check_row(lattice, c0, scratch, len, "collision");
    const std::size_t row = c0 / len;
    const int row_j = static_cast<int>(row % static_cast<std::size_t>(nyi));
    const int row_k = static_cast<int>(row / static_cast<std::size_t>(nyi));
    const bool row_inner = row_j > 0 && row_j < nyi - 1 && row_k > 0 && row_k < nzi - 1;

    std::size_t i = 0;
    while (i < len) {
      const std::size_t c = c0 + i;
      if (bulk[c]) {
        // Contiguous run of bulk cells: plain shifted copies.
        std::size_t end = i + 1;
        while (end < len && bulk[c0 + end]) ++end;
        for (std::size_t a = 0; a < Q; ++a) {
          double* d = dst + static_cast<std::ptrdiff_t>(a * n + c0) + shift[a];
          const double* o = out + a * len;
          for (std::size_t m = i; m < end; ++m) d[m] = o[m];
        }
        i = end;
        continue;
      }
      ++i;
      if (flags[c] != Lattice::kFluidCode) continue;

      const std::size_t col = i - 1;
      const CellCoord cc{static_cast<int>(col), row_j, row_k};
      // Interior cells never wrap, so their neighbors are fixed offsets.
      const bool interior = cc.i > 0 && cc.i < nxi - 1 && row_inner;
      dst[c] = out[col];
      bool have_rho = false;
      double rho_w = 0.0;
      for (std::size_t a = 1; a < Q; ++a) {
        const std::int64_t nb = interior ? static_cast<std::int64_t>(c) + shift[a] : lattice.neighbor(cc, static_cast<int>(a));
        const auto opp = static_cast<std::size_t>(kOpposite[a]);
        const double post = out[a * len + col];
        if (nb < 0 || flags[nb] == Lattice::kWallCode) {
          dst[opp * n + c] = post;
        } else if (flags[nb] >= 0) {
          if (!have_rho) {
            for (std::size_t b = 0; b < Q; ++b) rho_w += out[b * len + col];
            have_rho = true;
          }
          const std::int32_t body = flags[nb];
          const double corr = moving_correction(a, rho_w, wall_velocity[static_cast<std::size_t>(body)]);
          const double reflected = post + corr;
          if (reflected < kNegativeTolerance) throw_negative(lattice, c, kOpposite[a], reflected, "moving boundary");
          dst[opp * n + c] = reflected;
          lattice.add_hydro_force(body, link_vector(a) * (2.0 * post + corr));
        } else {
          dst[a * n + static_cast<std::size_t>(nb)] = post;
        }
      }
    }
  }
  lattice.swap_buffers();
  lattice.set_step_index(lattice.step_index() + 1);
}

}  // namespace tribead::lbm
