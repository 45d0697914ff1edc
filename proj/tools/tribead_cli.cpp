// Command-line front end: run, vacuum-scan, analyze, report.
// Exit codes: 0 success, 1 invalid input, 2 numerical instability.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tribead/analysis.hpp"
#include "tribead/errors.hpp"
#include "tribead/simulation.hpp"
#include "tribead/vacuum_oracle.hpp"

namespace fs = std::filesystem;
using namespace tribead;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUnstable = 2;

fs::path resolve(const fs::path& out_dir, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : out_dir / p;
}

int cmd_run(const std::string& config_path, const fs::path& out_dir, bool quiet) {
  const config::RunConfig cfg = config::load_config(config_path);
  fs::create_directories(out_dir);
  const std::string header = sim::run_log_header(cfg);
  std::ofstream log(out_dir / "run.log");
  log << header;
  if (!quiet) std::cout << header << std::flush;

  if (cfg.mode == config::Mode::FrequencyScan) {
    throw ValidationError("mode = frequency-scan runs through the vacuum-scan command");
  }
  sim::RunResult res;
  if (cfg.mode == config::Mode::Vacuum) {
    res = sim::run_vacuum(cfg);
  } else {
    sim::RunOptions opt;
    opt.keep_snapshots = cfg.output.fields;
    opt.progress_every = std::max(1L, cfg.steps / 20);
    opt.progress = [&](long step) {
      log << "step " << step << " / " << cfg.steps << '\n' << std::flush;
      if (!quiet) std::cerr << "step " << step << " / " << cfg.steps << '\n';
    };
    res = sim::run_fluid(cfg, opt);
  }
  const fs::path traj = resolve(out_dir, cfg.output.trajectory);
  io::write_trajectory(res.records, traj.string(), false, res.meta);
  log << "trajectory " << traj.string() << " rows " << res.records.size() << '\n';
  if (res.overlap_warnings > 0) log << "warning: " << res.overlap_warnings << " body overlap events\n";
  if (res.fallback_cells > 0) log << "warning: " << res.fallback_cells << " cells reconstructed at reference density\n";

  if (!res.snapshots.empty()) {
    const fs::path dir = resolve(out_dir, cfg.output.field_dir);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
      io::write_field(res.snapshots[i], (dir / ("field_" + std::to_string(res.snapshot_steps[i]) + ".txt")).string());
    }
    io::write_field(analysis::average_flow_field(res.snapshots), (dir / "field_average.txt").string());
    log << "fields " << res.snapshots.size() << " snapshots in " << dir.string() << '\n';
  }
  if (!quiet) std::cout << "wrote " << traj.string() << '\n';
  return kExitOk;
}

int cmd_vacuum_scan(const std::string& config_path, const fs::path& out_dir) {
  const config::RunConfig cfg = config::load_config(config_path);
  vacuum::VacuumSystem sys;
  sys.m = cfg.mass;
  sys.k = cfg.stiffness;
  sys.gamma = cfg.damping;
  sys.l0 = cfg.rest_length;
  sys.drive = cfg.drive;
  sys.drive.t1 = sys.drive.t2 = 1e300;
  const auto scan = vacuum::resonance_scan(sys, cfg.output.scan_damping, cfg.output.scan_lo, cfg.output.scan_hi,
                                           cfg.output.scan_points, swimmer::kLeft);
  fs::create_directories(out_dir);
  const fs::path csv = out_dir / "resonance_scan.csv";
  vacuum::write_scan_csv(scan, csv.string());
  std::cout << "damping ratio " << cfg.output.scan_damping << ", " << scan.size() << " points, wrote " << csv.string()
            << '\n';
  for (std::size_t i : vacuum::local_maxima(scan)) {
    std::cout << "maximum at omega0/omega = " << io::format_double(scan[i].ratio)
              << "  A/a = " << io::format_double(scan[i].amplitude_over_a) << '\n';
  }
  return kExitOk;
}

int cmd_analyze(const std::string& path) {
  const io::Trajectory traj = io::read_trajectory_file(path);
  const analysis::PerformanceReport rep = analysis::analyze(traj.rows, analysis::run_info(traj.meta));
  std::cout << analysis::report_csv({rep});
  return kExitOk;
}

int cmd_report(const std::string& dir) {
  std::vector<analysis::PerformanceReport> reports;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    io::Trajectory traj;
    try {
      traj = io::read_trajectory_file(f.string());
    } catch (const IoError&) {
      continue;  // not a trajectory
    }
    if (traj.meta.count("design") == 0 || traj.meta.count("mode") != 0) continue;
    reports.push_back(analysis::analyze(traj.rows, analysis::run_info(traj.meta)));
  }
  if (reports.empty()) throw InsufficientData("no fluid trajectories found in " + dir);
  std::stable_sort(reports.begin(), reports.end(),
                   [](const auto& a, const auto& b) { return a.design < b.design; });
  std::cout << analysis::report_tables(reports);
  const fs::path out = fs::path(dir) / "report.csv";
  std::ofstream os(out);
  if (!os) throw IoError("cannot write " + out.string());
  os << analysis::report_csv(reports);
  std::cout << "\nwrote " << out.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-bead microswimmer simulator (lattice Boltzmann + rigid bodies)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a fluid or vacuum simulation from a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("-o,--output-dir", out_dir, "Directory for outputs");
  run->add_flag("-q,--quiet", quiet, "Only write files");

  auto* scan = app.add_subcommand("vacuum-scan", "Amplitude versus natural frequency scan without fluid");
  scan->add_option("config", config_path, "Config file")->required();
  scan->add_option("-o,--output-dir", out_dir, "Directory for outputs");

  std::string traj_path;
  auto* analyze = app.add_subcommand("analyze", "Performance row for one trajectory");
  analyze->add_option("trajectory", traj_path, "Trajectory CSV")->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Tables for every trajectory in a directory");
  report->add_option("dir", report_dir, "Directory with trajectory CSVs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, quiet);
    if (*scan) return cmd_vacuum_scan(config_path, out_dir);
    if (*analyze) return cmd_analyze(traj_path);
    if (*report) return cmd_report(report_dir);
  } catch (const StabilityError& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const NonFiniteState& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const DegenerateDensity& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const OutOfDomain& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
