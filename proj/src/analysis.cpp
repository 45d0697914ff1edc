#include "tribead/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tribead/errors.hpp"
#include "tribead/swimmer.hpp"

namespace tribead::analysis {

namespace {

// Solves the 3x3 system in place by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b, std::array<double, 3>& x) {
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0.0) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < 3; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = 3; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < 3; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return true;
}

double interpolate(std::span<const double> t, std::span<const double> v, double at) {
  if (t.empty() || at < t.front() || at > t.back()) throw InsufficientData("trajectory does not cover the requested time");
  const auto it = std::lower_bound(t.begin(), t.end(), at);
  const auto i = static_cast<std::size_t>(it - t.begin());
  if (t[i] == at || i == 0) return v[i];
  const double w = (at - t[i - 1]) / (t[i] - t[i - 1]);
  return v[i - 1] + w * (v[i] - v[i - 1]);
}

}  // namespace

ArmFit fit_arm(std::span<const double> t, std::span<const double> l, double T, double window_begin,
               double window_end) {
  if (t.size() != l.size()) throw InsufficientData("time and arm samples differ in length");
  if (!(T > 0.0)) throw InsufficientData("period must be positive");
  ArmFit fit;
  fit.omega = 2.0 * std::numbers::pi / T;
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> rhs{};
  std::size_t n = 0;
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window_begin || t[i] > window_end) continue;
    if (n == 0) first = t[i];
    last = t[i];
    ++n;
    const std::array<double, 3> basis{1.0, std::cos(fit.omega * t[i]), std::sin(fit.omega * t[i])};
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
      rhs[r] += basis[r] * l[i];
    }
  }
  if (n < 4 || last - first < T * (1.0 - 1e-9)) {
    throw InsufficientData("fit window must contain at least one full period of samples");
  }
  std::array<double, 3> x{};
  if (!solve3(m, rhs, x)) throw InsufficientData("singular fit: samples do not resolve the period");
  fit.mean = x[0];
  const double p = x[1];
  const double q = x[2];
  fit.amplitude = std::hypot(p, q);
  fit.phase = std::atan2(-q, p);
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window_begin || t[i] > window_end) continue;
    const double r = l[i] - (fit.mean + p * std::cos(fit.omega * t[i]) + q * std::sin(fit.omega * t[i]));
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / static_cast<double>(n));
  if (fit.amplitude <= 1e-12 * std::max(1.0, std::abs(fit.mean))) {
    fit.amplitude = 0.0;
    fit.phase = 0.0;
    fit.ill_conditioned = true;
  }
  return fit;
}

double geometric_factor(double r1, double r2, double r3, double l1, double l2) {
  if (!(r1 > 0.0 && r2 > 0.0 && r3 > 0.0 && l1 > 0.0 && l2 > 0.0)) {
    throw ValidationError("geometric factor needs positive radii and arm lengths");
  }
  const double rs = r1 + r2 + r3;
  const double pre = 3.0 * r1 * r2 * r3 / (2.0 * rs * rs);
  return pre * (1.0 / (l1 * l1) + 1.0 / (l2 * l2) - 1.0 / ((l1 + l2) * (l1 + l2)));
}

double velocity_ga(double K, double d1, double d2, double omega, double phi1, double phi2) {
  return K * d1 * d2 * omega * std::sin(phi1 - phi2);
}

double measure_u_swim(std::span<const double> t, std::span<const double> z, double T, double window_end) {
  if (t.size() != z.size() || t.size() < 2) throw InsufficientData("need at least two trajectory samples");
  if (!(T > 0.0)) throw InsufficientData("period must be positive");
  const double begin = window_end - T;
  if (begin < t.front() || window_end > t.back()) throw InsufficientData("trajectory does not span a full cycle");
  return (interpolate(t, z, window_end) - interpolate(t, z, begin)) / T;
}

double last_cycle_end(double t_last, double T, double drive_end) {
  const double limit = std::min(t_last, drive_end);
  const double cycles = std::floor(limit / T + 1e-9);
  if (cycles < 1.0) throw InsufficientData("record holds no complete driven cycle");
  return cycles * T;
}

double reynolds(double u, double l, double nu) {
  if (!(nu > 0.0)) throw ValidationError("viscosity must be positive");
  return u * l / nu;
}

double efficiency(double u_swim, double r_eff, double mean_power, double mu) {
  if (!(mean_power > 0.0)) throw NonPositivePower("mean driving power is not positive");
  return 6.0 * std::numbers::pi * mu * r_eff * u_swim * u_swim / mean_power;
}

double mean_drive_power(const std::vector<io::TrajectoryRecord>& rows, double T, double window_end) {
  const double begin = window_end - T;
  double integral = 0.0;
  const io::TrajectoryRecord* prev = nullptr;
  double prev_p = 0.0;
  for (const io::TrajectoryRecord& r : rows) {
    const auto t = static_cast<double>(r.t);
    if (t < begin || t > window_end) continue;
    double p = 0.0;
    for (std::size_t b = 0; b < 3; ++b) p += r.f_drive[b] * r.uz[b];
    if (prev != nullptr) integral += 0.5 * (p + prev_p) * (t - static_cast<double>(prev->t));
    prev = &r;
    prev_p = p;
  }
  if (prev == nullptr) throw InsufficientData("no samples in the power window");
  return integral / T;
}

double velocity_error(double u_ga, double u_swim) {
  if (u_ga == 0.0) throw DivisionByZero("velocity error undefined for u_GA = 0");
  return std::abs((u_ga - u_swim) / u_ga) * 100.0;
}

io::FieldData average_flow_field(const std::vector<io::FieldData>& snapshots) {
  if (snapshots.empty()) throw InsufficientData("no flow-field snapshots to average");
  io::FieldData avg = snapshots.front();
  for (std::size_t s = 1; s < snapshots.size(); ++s) {
    const io::FieldData& f = snapshots[s];
    if (!(f.dims == avg.dims) || f.rho.size() != avg.rho.size()) throw ValidationError("snapshot dimensions differ");
    for (std::size_t c = 0; c < avg.rho.size(); ++c) {
      avg.rho[c] += f.rho[c];
      avg.ux[c] += f.ux[c];
      avg.uy[c] += f.uy[c];
      avg.uz[c] += f.uz[c];
    }
  }
  const double inv = 1.0 / static_cast<double>(snapshots.size());
  for (std::size_t c = 0; c < avg.rho.size(); ++c) {
    avg.rho[c] *= inv;
    avg.ux[c] *= inv;
    avg.uy[c] *= inv;
    avg.uz[c] *= inv;
  }
  return avg;
}

RunInfo run_info(const io::Metadata& meta) {
  auto get = [&meta](const char* key) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw InsufficientData(std::string("trajectory metadata lacks '") + key + "'");
    return it->second;
  };
  RunInfo info;
  const std::string d = get("design");
  if (d.size() != 1) throw ValidationError("bad design in metadata");
  info.design = d[0];
  info.scale = io::parse_double(get("geometry_scale"));
  info.T = io::parse_double(get("T"));
  info.nu = io::parse_double(get("viscosity"));
  info.drive_end = io::parse_double(get("t1"));
  return info;
}

PerformanceReport analyze(const std::vector<io::TrajectoryRecord>& rows, const RunInfo& info) {
  if (rows.size() < 4) throw InsufficientData("trajectory too short to analyse");
  const swimmer::SwimmerDesign d = swimmer::design(info.design);
  PerformanceReport rep;
  rep.design = info.design;
  rep.rest_length = d.rest_total_length() * info.scale;
  rep.width = d.width() * info.scale;
  rep.window_end = last_cycle_end(static_cast<double>(rows.back().t), info.T, info.drive_end);
  rep.window_begin = rep.window_end - info.T;

  std::vector<double> t;
  std::vector<double> l1;
  std::vector<double> l2;
  std::vector<double> zmid;
  for (const io::TrajectoryRecord& r : rows) {
    t.push_back(static_cast<double>(r.t));
    l1.push_back(r.l1);
    l2.push_back(r.l2);
    zmid.push_back(r.position[swimmer::kMiddle].z);
  }
  rep.arm1 = fit_arm(t, l1, info.T, rep.window_begin, rep.window_end);
  rep.arm2 = fit_arm(t, l2, info.T, rep.window_begin, rep.window_end);

  std::array<double, 3> radii{};
  for (std::size_t b = 0; b < 3; ++b) radii[b] = swimmer::slot_equivalent_radius(d.slots[b], info.scale);
  rep.K = geometric_factor(radii[0], radii[1], radii[2], rep.arm1.mean, rep.arm2.mean);
  rep.u_ga = velocity_ga(rep.K, rep.arm1.amplitude, rep.arm2.amplitude, rep.arm1.omega, rep.arm1.phase,
                         rep.arm2.phase);
  rep.u_swim = measure_u_swim(t, zmid, info.T, rep.window_end);
  rep.error_percent = rep.u_ga != 0.0 ? velocity_error(rep.u_ga, rep.u_swim) : 0.0;
  const double power = mean_drive_power(rows, info.T, rep.window_end);
  rep.efficiency = efficiency(rep.u_swim, radii[0] + radii[1] + radii[2], power, info.nu);
  rep.re_swim = reynolds(rep.u_swim, rep.rest_length, info.nu);

  std::array<double, 3> vmax{};
  for (const io::TrajectoryRecord& r : rows) {
    const auto tt = static_cast<double>(r.t);
    if (tt < rep.window_begin || tt > rep.window_end) continue;
    for (std::size_t b = 0; b < 3; ++b) vmax[b] = std::max(vmax[b], std::abs(r.uz[b]));
  }
  for (std::size_t b = 0; b < 3; ++b) {
    const double extent = 2.0 * swimmer::slot_half_length(d.slots[b], info.scale);
    rep.re_body[b] = reynolds(vmax[b], extent, info.nu);
  }
  return rep;
}

std::string report_csv(const std::vector<PerformanceReport>& reports) {
  using io::format_double;
  std::ostringstream os;
  os << "design,rest_length,width,re_swim,re_b2,re_b1,re_b3,u_swim,u_ga,error_percent,efficiency,"
        "d1,d2,sin_phi1_minus_phi2,K,l1_mean,l2_mean\n";
  for (const PerformanceReport& r : reports) {
    os << r.design << ',' << format_double(r.rest_length) << ',' << format_double(r.width) << ','
       << format_double(r.re_swim) << ',' << format_double(r.re_body[0]) << ',' << format_double(r.re_body[1]) << ','
       << format_double(r.re_body[2]) << ',' << format_double(r.u_swim) << ',' << format_double(r.u_ga) << ','
       << format_double(r.error_percent) << ',' << format_double(r.efficiency) << ','
       << format_double(r.arm1.amplitude) << ',' << format_double(r.arm2.amplitude) << ','
       << format_double(std::sin(r.arm1.phase - r.arm2.phase)) << ',' << format_double(r.K) << ','
       << format_double(r.arm1.mean) << ',' << format_double(r.arm2.mean) << '\n';
  }
  return os.str();
}

std::string report_tables(const std::vector<PerformanceReport>& reports) {
  std::ostringstream os;
  char buf[256];
  os << "Swimmer parameters\n";
  std::snprintf(buf, sizeof buf, "%-6s %8s %6s %10s %9s %9s %9s\n", "design", "length", "width", "Re_swim", "Re_B2",
                "Re_B1", "Re_B3");
  os << buf;
  for (const PerformanceReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%-6c %8.1f %6.1f %10.3e %9.3f %9.3f %9.3f\n", r.design, r.rest_length, r.width,
                  r.re_swim, r.re_body[0], r.re_body[1], r.re_body[2]);
    os << buf;
  }
  os << "\nSwimming velocities\n";
  std::snprintf(buf, sizeof buf, "%-6s %11s %11s %8s %11s\n", "design", "u_swim", "u_GA", "error%", "efficiency");
  os << buf;
  for (const PerformanceReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%-6c %11.3e %11.3e %8.2f %11.3e\n", r.design, r.u_swim, r.u_ga, r.error_percent,
                  r.efficiency);
    os << buf;
  }
  os << "\nArm parameters\n";
  std::snprintf(buf, sizeof buf, "%-6s %7s %7s %8s %8s %8s %8s\n", "design", "d1", "d2", "sin", "K", "l1", "l2");
  os << buf;
  for (const PerformanceReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%-6c %7.3f %7.3f %8.3f %8.5f %8.3f %8.3f\n", r.design, r.arm1.amplitude,
                  r.arm2.amplitude, std::sin(r.arm1.phase - r.arm2.phase), r.K, r.arm1.mean, r.arm2.mean);
    os << buf;
  }
  return os.str();
}

}  // namespace tribead::analysis
