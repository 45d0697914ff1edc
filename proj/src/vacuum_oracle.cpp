#include "tribead/vacuum_oracle.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "tribead/errors.hpp"
#include "tribead/io.hpp"

namespace tribead::vacuum {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrt6 = std::sqrt(6.0);

// Normal modes of the chain Laplacian in (B2, B1, B3) order.
struct Mode {
  std::array<double, 3> v;
  double lambda;
};
const std::array<Mode, 2> kModes{{
    {{1.0 / kSqrt2, 0.0, -1.0 / kSqrt2}, 1.0},
    {{1.0 / kSqrt6, -2.0 / kSqrt6, 1.0 / kSqrt6}, 3.0},
}};
const std::array<double, 3> kCm{1.0 / std::numbers::sqrt3, 1.0 / std::numbers::sqrt3, 1.0 / std::numbers::sqrt3};

std::array<double, 3> rest_layout(double l0) { return {-l0, 0.0, l0}; }

double project(const std::array<double, 3>& v, const std::array<double, 3>& q) {
  return v[0] * q[0] + v[1] * q[1] + v[2] * q[2];
}

// m y'' + c y' + kk y = g(t) for one relative mode.
struct Oscillator {
  double m;
  double c;
  double kk;
  double sigma;
  double wd;

  Oscillator(double m_, double c_, double kk_) : m(m_), c(c_), kk(kk_), sigma(c_ / (2.0 * m_)) {
    const double w2 = kk / m - sigma * sigma;
    if (!(w2 > 0.0)) throw ValidationError("vacuum oracle needs underdamped relative modes");
    wd = std::sqrt(w2);
  }

  // Free motion starting from (y0, v0) at s = 0; returns value, rate, acceleration.
  [[nodiscard]] std::array<double, 3> free(double y0, double v0, double s) const {
    const double a0 = y0;
    const double b0 = (v0 + sigma * y0) / wd;
    const double a1 = -sigma * a0 + wd * b0;
    const double b1 = -sigma * b0 - wd * a0;
    const double a2 = -sigma * a1 + wd * b1;
    const double b2 = -sigma * b1 - wd * a1;
    const double e = std::exp(-sigma * s);
    const double cs = std::cos(wd * s);
    const double sn = std::sin(wd * s);
    return {e * (a0 * cs + b0 * sn), e * (a1 * cs + b1 * sn), e * (a2 * cs + b2 * sn)};
  }
};

// Steady response to amp * sin(w (t - shift)).
struct Sinusoid {
  double amp;
  double w;
  double shift;
};

std::array<double, 3> particular(const Oscillator& o, const Sinusoid& f, double t) {
  const double re = o.kk - o.m * f.w * f.w;
  const double im = o.c * f.w;
  const double det = re * re + im * im;
  const double p = f.amp * re / det;
  const double q = -f.amp * im / det;
  const double ph = f.w * (t - f.shift);
  const double sn = std::sin(ph);
  const double cs = std::cos(ph);
  return {p * sn + q * cs, f.w * (p * cs - q * sn), -f.w * f.w * (p * sn + q * cs)};
}

// Response to the sinusoid switched on at `on` from rest.
std::array<double, 3> switched_on(const Oscillator& o, const Sinusoid& f, double on, double t) {
  if (t < on) return {0.0, 0.0, 0.0};
  const auto p = particular(o, f, t);
  const auto p0 = particular(o, f, on);
  const auto h = o.free(p0[0], p0[1], t - on);
  return {p[0] - h[0], p[1] - h[1], p[2] - h[2]};
}

struct Piece {
  Sinusoid force;  // in body space, before projection
  int body;        // 0 = B2, 2 = B3; B1 carries the negated sum
  double on;
  double off;
};

std::vector<Piece> drive_pieces(const swimmer::DriveProtocol& d) {
  const double w = 2.0 * std::numbers::pi / d.T;
  std::vector<Piece> pieces;
  if (d.t1 > 0.0 && d.a != 0.0) pieces.push_back({{-d.a, w, 0.0}, 0, 0.0, d.t1});
  if (d.t2 > d.phi && d.a != 0.0) pieces.push_back({{d.a, w, d.phi}, 2, d.phi, d.t2});
  return pieces;
}

}  // namespace

void VacuumSystem::validate() const {
  if (!(m > 0.0)) throw ValidationError("mass must be positive");
  if (k == 0.0) throw DegenerateMode("spring stiffness is zero; relative modes are degenerate");
  if (!(k > 0.0)) throw ValidationError("spring stiffness must be positive");
  if (!(gamma >= 0.0)) throw ValidationError("damping must be non-negative");
  drive.validate();
}

State analytic_solution(const VacuumSystem& s, double t) {
  s.validate();
  const auto ref = rest_layout(s.l0);
  std::array<double, 3> q0{};
  for (std::size_t i = 0; i < 3; ++i) q0[i] = s.x0[i] - ref[i];

  State out;
  out.t = t;
  // Centre of mass drifts freely: the drive has zero net force.
  const double cm0 = project(kCm, q0);
  const double cmv = project(kCm, s.v0);
  for (std::size_t i = 0; i < 3; ++i) {
    out.x[i] = ref[i] + kCm[i] * (cm0 + cmv * t);
    out.v[i] = kCm[i] * cmv;
    out.a[i] = 0.0;
  }

  const auto pieces = drive_pieces(s.drive);
  for (const Mode& mode : kModes) {
    const Oscillator osc(s.m, s.gamma * mode.lambda, s.k * mode.lambda);
    auto y = osc.free(project(mode.v, q0), project(mode.v, s.v0), t);
    for (const Piece& p : pieces) {
      // F_B1 = -(F_B2 + F_B3), so a force on body b projects with v[b] - v[B1].
      const double coupling = mode.v[static_cast<std::size_t>(p.body)] - mode.v[1];
      const Sinusoid f{p.force.amp * coupling, p.force.w, p.force.shift};
      const auto on = switched_on(osc, f, p.on, t);
      const auto off = switched_on(osc, f, p.off, t);
      for (std::size_t c = 0; c < 3; ++c) y[c] += on[c] - off[c];
    }
    for (std::size_t i = 0; i < 3; ++i) {
      out.x[i] += mode.v[i] * y[0];
      out.v[i] += mode.v[i] * y[1];
      out.a[i] += mode.v[i] * y[2];
    }
  }
  return out;
}

SteadyOscillation steady_state(const VacuumSystem& s, int mass) {
  s.validate();
  if (mass < 0 || mass > 2) throw ValidationError("mass index must be 0, 1 or 2");
  const double w = 2.0 * std::numbers::pi / s.drive.T;
  // Phasors: F2 = Im(-a e^{iwt}), F3 = Im(a e^{iw(t - phi)}).
  const std::complex<double> g2(-s.drive.a, 0.0);
  const std::complex<double> g3 = s.drive.a * std::polar(1.0, -w * s.drive.phi);
  std::complex<double> x(0.0, 0.0);
  for (const Mode& mode : kModes) {
    const std::complex<double> g = (mode.v[0] - mode.v[1]) * g2 + (mode.v[2] - mode.v[1]) * g3;
    const std::complex<double> z(s.k * mode.lambda - s.m * w * w, s.gamma * mode.lambda * w);
    x += mode.v[static_cast<std::size_t>(mass)] * (g / z);
  }
  const auto ref = rest_layout(s.l0);
  std::array<double, 3> q0{};
  for (std::size_t i = 0; i < 3; ++i) q0[i] = s.x0[i] - ref[i];
  return {std::abs(x), std::arg(x), ref[static_cast<std::size_t>(mass)] + kCm[static_cast<std::size_t>(mass)] * project(kCm, q0)};
}

double steady_amplitude(const VacuumSystem& s, int mass) { return steady_state(s, mass).amplitude; }

std::array<double, 3> acceleration(const VacuumSystem& s, double t, const std::array<double, 3>& x,
                                   const std::array<double, 3>& v) {
  const auto f = swimmer::driving_forces(s.drive, t).by_index();
  const double d1 = (x[0] - x[1]) + s.l0;
  const double d2 = (x[2] - x[1]) - s.l0;
  const double s1 = -s.k * d1 - s.gamma * (v[0] - v[1]);
  const double s2 = -s.k * d2 - s.gamma * (v[2] - v[1]);
  return {(s1 + f[0]) / s.m, (-s1 - s2 + f[1]) / s.m, (s2 + f[2]) / s.m};
}

double residual(const VacuumSystem& s, double t, const std::array<double, 3>& x, const std::array<double, 3>& v,
                const std::array<double, 3>& a) {
  const auto expect = acceleration(s, t, x, v);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(s.m * (a[i] - expect[i])));
  return worst;
}

std::vector<State> integrate_reference(const VacuumSystem& s, long steps, double dt, long sample_every) {
  s.validate();
  if (!(dt > 0.0) || steps < 0 || sample_every < 1) throw ValidationError("bad reference integration settings");
  using A3 = std::array<double, 3>;
  auto axpy = [](const A3& y, double h, const A3& d) { return A3{y[0] + h * d[0], y[1] + h * d[1], y[2] + h * d[2]}; };

  std::vector<State> out;
  State st;
  st.x = s.x0;
  st.v = s.v0;
  st.a = acceleration(s, 0.0, st.x, st.v);
  out.push_back(st);
  for (long n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const A3 k1x = st.v;
    const A3 k1v = acceleration(s, t, st.x, st.v);
    const A3 x2 = axpy(st.x, 0.5 * dt, k1x);
    const A3 v2 = axpy(st.v, 0.5 * dt, k1v);
    const A3 k2v = acceleration(s, t + 0.5 * dt, x2, v2);
    const A3 x3 = axpy(st.x, 0.5 * dt, v2);
    const A3 v3 = axpy(st.v, 0.5 * dt, k2v);
    const A3 k3v = acceleration(s, t + 0.5 * dt, x3, v3);
    const A3 x4 = axpy(st.x, dt, v3);
    const A3 v4 = axpy(st.v, dt, k3v);
    const A3 k4v = acceleration(s, t + dt, x4, v4);
    for (std::size_t i = 0; i < 3; ++i) {
      st.x[i] += dt / 6.0 * (k1x[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
      st.v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
      if (!std::isfinite(st.x[i]) || !std::isfinite(st.v[i])) {
        throw NonFiniteState("reference integration diverged at step " + std::to_string(n + 1));
      }
    }
    st.t = static_cast<double>(n + 1) * dt;
    if ((n + 1) % sample_every == 0 || n + 1 == steps) {
      st.a = acceleration(s, st.t, st.x, st.v);
      out.push_back(st);
    }
  }
  return out;
}

double energy(const VacuumSystem& s, const State& st) {
  const double d1 = (st.x[0] - st.x[1]) + s.l0;
  const double d2 = (st.x[2] - st.x[1]) - s.l0;
  double e = 0.5 * s.k * (d1 * d1 + d2 * d2);
  for (double v : st.v) e += 0.5 * s.m * v * v;
  return e;
}

std::vector<ScanPoint> resonance_scan(const VacuumSystem& base, double damping_ratio, double lo, double hi,
                                      int points, int mass) {
  if (points < 2 || !(hi > lo) || !(lo > 0.0)) throw ValidationError("bad resonance scan range");
  const double w = 2.0 * std::numbers::pi / base.drive.T;
  std::vector<ScanPoint> scan;
  scan.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double ratio = lo + (hi - lo) * i / (points - 1);
    VacuumSystem s = base;
    const double w0 = ratio * w;
    s.k = s.m * w0 * w0;
    s.gamma = 2.0 * damping_ratio * std::sqrt(s.m * s.k);
    scan.push_back({ratio, steady_amplitude(s, mass) / base.drive.a});
  }
  return scan;
}

std::vector<std::size_t> local_maxima(const std::vector<ScanPoint>& scan) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
    if (scan[i].amplitude_over_a > scan[i - 1].amplitude_over_a &&
        scan[i].amplitude_over_a > scan[i + 1].amplitude_over_a) {
      out.push_back(i);
    }
  }
  return out;
}

void write_scan_csv(const std::vector<ScanPoint>& scan, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "omega0_over_omega,amplitude_over_a\n";
  for (const ScanPoint& p : scan) os << io::format_double(p.ratio) << ',' << io::format_double(p.amplitude_over_a) << '\n';
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace tribead::vacuum
