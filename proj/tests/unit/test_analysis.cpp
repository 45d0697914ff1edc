#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tribead/analysis.hpp"
#include "tribead/errors.hpp"

using namespace tribead;
using namespace tribead::analysis;

namespace {

constexpr double kT = 1000.0;

struct Series {
  std::vector<double> t;
  std::vector<double> v;
};

Series cosine(double mean, double d, double phase, double t0, double t1, double dt = 1.0) {
  Series s;
  const double w = 2.0 * std::numbers::pi / kT;
  for (double t = t0; t <= t1 + 1e-9; t += dt) {
    s.t.push_back(t);
    s.v.push_back(mean + d * std::cos(w * t + phase));
  }
  return s;
}

}  // namespace

TEST_CASE("arm fit recovers a synthetic cosine") {
  const Series s = cosine(16.0, 2.53, 0.3, 0.0, 5.0 * kT);
  const ArmFit f = fit_arm(s.t, s.v, kT, 4.0 * kT, 5.0 * kT);
  CHECK(std::abs(f.mean - 16.0) < 1e-12);
  CHECK(std::abs(f.amplitude - 2.53) < 1e-12);
  CHECK(std::abs(f.phase - 0.3) < 1e-12);
  CHECK(f.omega == doctest::Approx(2.0 * std::numbers::pi / kT));
  CHECK(f.rms < 1e-12);
  CHECK_FALSE(f.ill_conditioned);
}

TEST_CASE("arm fit round-trips random parameters") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> amp(0.1, 5.0);
  std::uniform_real_distribution<double> ph(-3.0, 3.0);
  for (int n = 0; n < 50; ++n) {
    const double d = amp(rng);
    const double p = ph(rng);
    const Series s = cosine(12.0, d, p, 2.0 * kT, 3.0 * kT, 5.0);
    const ArmFit f = fit_arm(s.t, s.v, kT, 2.0 * kT, 3.0 * kT);
    CHECK(std::abs(f.amplitude - d) < 1e-10);
    CHECK(std::abs(std::remainder(f.phase - p, 2.0 * std::numbers::pi)) < 1e-10);
  }
}

TEST_CASE("arm fit input checks") {
  const Series s = cosine(16.0, 1.0, 0.0, 0.0, 0.5 * kT);
  CHECK_THROWS_AS((void)fit_arm(s.t, s.v, kT, 0.0, kT), InsufficientData);
  const std::vector<double> t{0.0, 1.0, 2.0};
  const std::vector<double> v{1.0, 1.0, 1.0};
  CHECK_THROWS_AS((void)fit_arm(t, v, 2.0, 0.0, 2.0), InsufficientData);

  const Series flat = cosine(16.0, 0.0, 0.0, 0.0, kT, 10.0);
  const ArmFit f = fit_arm(flat.t, flat.v, kT, 0.0, kT);
  CHECK(f.ill_conditioned);
  CHECK(f.amplitude == 0.0);
  CHECK(f.phase == 0.0);
  CHECK(f.mean == doctest::Approx(16.0));
}

TEST_CASE("geometric factor") {
  // Independent expansion of the formula for equal radii r and equal arms l:
  // (3 r^3 / (18 r^2)) (2/l^2 - 1/(4 l^2)) = (r/6) (7 / (4 l^2)).
  CHECK(geometric_factor(4, 4, 4, 16, 16) == doctest::Approx(4.0 / 6.0 * 7.0 / (4.0 * 256.0)).epsilon(1e-14));
  CHECK(std::abs(geometric_factor(4, 4, 4, 16, 16) - 0.0045) <= 1e-4);
  CHECK(std::abs(geometric_factor(8, 8, 8, 24, 24) - 0.0040) <= 1e-4);
  // Three parallel capsules as diameter-12 spheres, centre spacing 24.
  CHECK(std::abs(geometric_factor(6, 6, 6, 24, 24) - 0.0030) <= 1e-4);
  CHECK_THROWS_AS((void)geometric_factor(0, 4, 4, 16, 16), ValidationError);
}

TEST_CASE("geometric factor falls as the arms grow") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> r(0.5, 10.0);
  std::uniform_real_distribution<double> l(5.0, 50.0);
  std::uniform_real_distribution<double> step(0.01, 10.0);
  for (int n = 0; n < 500; ++n) {
    const double r1 = r(rng);
    const double r2 = r(rng);
    const double r3 = r(rng);
    const double l1 = l(rng);
    const double l2 = l(rng);
    const double d = step(rng);
    CHECK(geometric_factor(r1, r2, r3, l1 + d, l2) < geometric_factor(r1, r2, r3, l1, l2));
    CHECK(geometric_factor(r1, r2, r3, l1, l2 + d) < geometric_factor(r1, r2, r3, l1, l2));
  }
}

TEST_CASE("Golestanian-Ajdari velocity") {
  const double s = 0.94;
  const double dphi = std::asin(s);
  const double u = velocity_ga(0.0045, 2.53, 3.80, 0.00022, dphi, 0.0);
  CHECK(u == doctest::Approx(8.9e-6).epsilon(0.01));
  CHECK(std::abs(u - 8.98e-6) / 8.98e-6 < 0.02);
  CHECK(velocity_ga(0.0045, 2.53, 3.80, 0.00022, 0.4, 0.4) == 0.0);
  CHECK(velocity_ga(0.0045, 3.80, 2.53, 0.00022, 0.0, dphi) == doctest::Approx(-u));
}

TEST_CASE("swimming speed over the last cycle") {
  std::vector<double> t;
  std::vector<double> z;
  for (int i = 0; i <= 5000; ++i) {
    t.push_back(i);
    z.push_back(100.0 + 2e-3 * i + std::sin(2.0 * std::numbers::pi * i / kT));
  }
  CHECK(measure_u_swim(t, z, kT, 5000.0) == doctest::Approx(2e-3).epsilon(1e-9));
  std::vector<double> still(t.size(), 100.0);
  CHECK(measure_u_swim(t, still, kT, 5000.0) == 0.0);
  CHECK_THROWS_AS((void)measure_u_swim(t, z, kT, 6000.0), InsufficientData);
  CHECK_THROWS_AS((void)measure_u_swim(std::vector<double>{0.0}, std::vector<double>{1.0}, kT, 0.0), InsufficientData);

  CHECK(last_cycle_end(196812.0, 28116.0, 140580.0) == 140580.0);
  CHECK(last_cycle_end(8436.0, 2812.0, 1e9) == 8436.0);
  CHECK_THROWS_AS((void)last_cycle_end(100.0, 1000.0, 1e9), InsufficientData);
}

TEST_CASE("Reynolds numbers") {
  CHECK(reynolds(0.0, 40.0, 1.0 / 18.0) == 0.0);
  // Swimmer-scale value for design (a): 9.05e-6 * 40 / (1/18).
  CHECK(reynolds(9.05e-6, 40.0, 1.0 / 18.0) == doctest::Approx(6.516e-3).epsilon(1e-3));
  CHECK_THROWS_AS((void)reynolds(1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("efficiency and error") {
  const double e1 = efficiency(1e-5, 12.0, 2e-4, 1.0 / 18.0);
  CHECK(efficiency(2e-5, 12.0, 2e-4, 1.0 / 18.0) == doctest::Approx(4.0 * e1));
  CHECK(e1 == doctest::Approx(6.0 * std::numbers::pi / 18.0 * 12.0 * 1e-10 / 2e-4));
  CHECK_THROWS_AS((void)efficiency(1e-5, 12.0, 0.0, 1.0), NonPositivePower);
  CHECK_THROWS_AS((void)efficiency(1e-5, 12.0, -1.0, 1.0), NonPositivePower);

  CHECK(velocity_error(9.0e-6, 9.0e-6) == 0.0);
  CHECK(velocity_error(8.98e-6, 9.05e-6) < 1.0);
  CHECK(velocity_error(2.45e-6, 2.02e-6) < 18.0);
  CHECK_THROWS_AS((void)velocity_error(0.0, 1.0), DivisionByZero);
}

TEST_CASE("mean drive power uses the trapezoid rule") {
  std::vector<io::TrajectoryRecord> rows;
  for (int i = 0; i <= 20; ++i) {
    io::TrajectoryRecord r;
    r.t = i * 100;
    r.f_drive = {1.0, 0.0, 0.0};
    r.uz = {static_cast<double>(i), 0.0, 0.0};  // power grows linearly
    rows.push_back(r);
  }
  // Mean of a linear ramp over [1000, 2000] is its midpoint value, 15.
  CHECK(mean_drive_power(rows, kT, 2000.0) == doctest::Approx(15.0));
}

TEST_CASE("flow-field averaging") {
  io::FieldData a;
  a.dims = {2, 1, 1};
  a.rho = {1.0, 1.0};
  a.ux = {0.1, -0.2};
  a.uy = {0.0, 0.3};
  a.uz = {0.5, 0.0};
  CHECK(average_flow_field({a}).ux == a.ux);
  const io::FieldData same = average_flow_field({a, a, a});
  for (std::size_t c = 0; c < 2; ++c) CHECK(same.uz[c] == doctest::Approx(a.uz[c]));
  io::FieldData b = a;
  for (std::size_t c = 0; c < 2; ++c) {
    b.ux[c] = -a.ux[c];
    b.uy[c] = -a.uy[c];
    b.uz[c] = -a.uz[c];
  }
  const io::FieldData zero = average_flow_field({a, b});
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(zero.ux[c] == 0.0);
    CHECK(zero.uz[c] == 0.0);
    CHECK(zero.rho[c] == 1.0);
  }
  CHECK_THROWS_AS((void)average_flow_field({}), InsufficientData);
}

TEST_CASE("full analysis of a synthetic swimmer record") {
  const double T = kT;
  const double w = 2.0 * std::numbers::pi / T;
  const double u = 1e-4;
  std::vector<io::TrajectoryRecord> rows;
  for (int i = 0; i <= 5000; ++i) {
    const double t = i;
    const double zc = 100.0 + u * t;
    const double l1 = 16.0 + 2.0 * std::cos(w * t + 1.2);
    const double l2 = 16.0 + 3.0 * std::cos(w * t);
    io::TrajectoryRecord r;
    r.t = i;
    r.position[0].z = zc - l1;
    r.position[1].z = zc;
    r.position[2].z = zc + l2;
    r.l1 = l1;
    r.l2 = l2;
    r.uz = {u + 2.0 * w * std::sin(w * t + 1.2), u, u - 3.0 * w * std::sin(w * t)};
    // Forces in phase with the outer velocities so the drive does work.
    r.f_drive = {r.uz[0], -(r.uz[0] + r.uz[2]), r.uz[2]};
    rows.push_back(r);
  }
  const RunInfo info{'a', 1.0, T, 1.0 / 18.0, 5.0 * T};
  const PerformanceReport rep = analyze(rows, info);
  CHECK(rep.window_begin == 4.0 * T);
  CHECK(rep.window_end == 5.0 * T);
  CHECK(rep.arm1.amplitude == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.arm2.amplitude == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(rep.K == doctest::Approx(geometric_factor(4, 4, 4, 16, 16)).epsilon(1e-9));
  CHECK(rep.u_swim == doctest::Approx(u).epsilon(1e-9));
  CHECK(rep.u_ga == doctest::Approx(rep.K * 6.0 * w * std::sin(1.2)).epsilon(1e-9));
  CHECK(rep.rest_length == 40.0);
  CHECK(rep.re_swim == doctest::Approx(u * 40.0 * 18.0));
  CHECK(rep.re_body[1] == doctest::Approx(u * 8.0 * 18.0));
  CHECK(std::isfinite(rep.efficiency));

  const std::string csv = report_csv({rep});
  CHECK(csv.rfind("design,", 0) == 0);
  CHECK(csv.find("\na,40,8,") != std::string::npos);
  CHECK_FALSE(report_tables({rep}).empty());
}

TEST_CASE("run metadata") {
  io::Metadata meta{{"design", "c"}, {"geometry_scale", "0.75"}, {"T", "2812"}, {"viscosity", "0.3"}, {"t1", "9000"}};
  const RunInfo info = run_info(meta);
  CHECK(info.design == 'c');
  CHECK(info.scale == 0.75);
  CHECK(info.T == 2812.0);
  CHECK(info.drive_end == 9000.0);
  meta.erase("T");
  CHECK_THROWS_AS((void)run_info(meta), InsufficientData);
}
