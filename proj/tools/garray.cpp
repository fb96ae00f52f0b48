// garray: generate trajectories, compute cross-array distance estimates,
// classify live vs replayed optics and compute ground slope.
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime/numeric error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "garray/demo.hpp"
#include "garray/io/config.hpp"
#include "garray/io/csv.hpp"
#include "garray/io/reports.hpp"
#include "garray/pipeline.hpp"

namespace fs = std::filesystem;
using namespace garray;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

Vec3 parse_vec3_arg(const std::string& text, const std::string& flag) {
  return io::detail::parse_vec3(text, "--" + flag);
}

fs::path resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  return io::default_output_dir();
}

bool is_track_file(const std::string& path) { return fs::path(path).extension() == ".csv"; }

struct Source {
  KinematicTrack track;
  std::optional<ScenePoint> object;
  io::RunConfig config;
};

// A motion source is either a run configuration or a track CSV.
Source load_source(const std::string& path) {
  Source s;
  if (is_track_file(path)) {
    s.track = io::read_track_file(path);
  } else {
    s.config = io::load_run_config(path);
    s.track = generate(s.config.scenario);
    s.object = s.config.scenario.object;
  }
  return s;
}

RateMode parse_rates(const std::string& text) {
  return io::detail::parse_enum<RateMode>(
      text, "--rates",
      {{"automatic", RateMode::automatic}, {"kinematic", RateMode::kinematic}, {"numeric", RateMode::numeric}});
}

// ---------------------------------------------------------------------------

int cmd_generate(const std::string& config_path, const std::string& out) {
  const io::RunConfig cfg = io::load_run_config(config_path);
  const KinematicTrack track = generate(cfg.scenario);
  const fs::path path = out.empty() ? resolve_out_dir({}, cfg.output_dir) / "track.csv" : fs::path(out);
  io::write_file_atomic(path, io::track_csv(track));
  std::cout << "wrote " << path.string() << " (" << track.size() << " samples)\n";
  return 0;
}

struct AnalyzeArgs {
  std::string config, track, object, out_dir, rates;
  std::optional<double> tolerance, reach;
};

int cmd_analyze(const AnalyzeArgs& a) {
  if (a.config.empty() == a.track.empty()) throw ConfigError("analyze: give exactly one of --config or --track");
  io::RunConfig cfg;
  KinematicTrack track;
  if (!a.config.empty()) {
    cfg = io::load_run_config(a.config);
    track = generate(cfg.scenario);
  } else {
    if (a.object.empty()) throw ConfigError("analyze: --track requires --object");
    track = io::read_track_file(a.track);
  }
  ScenePoint object = cfg.scenario.object;
  if (!a.object.empty()) object.position = parse_vec3_arg(a.object, "object");
  if (a.tolerance) cfg.tolerance = *a.tolerance;
  if (a.reach) cfg.reach_threshold = *a.reach;
  if (!a.rates.empty()) cfg.observables.rates = parse_rates(a.rates);

  const ScenarioRun run = run_track(track, object, cfg.observables, cfg.gravity);
  const std::string id = a.config.empty() ? fs::path(a.track).stem().string() : fs::path(a.config).stem().string();
  const AccuracyReport acc = accuracy(run.estimates, cfg.tolerance, id);

  io::json report = io::to_json(acc);
  report["reach"] = io::to_json(reach_judgment(run.estimates, cfg.reach_threshold));
  report["exploration"] = io::to_json(exploration_summary(track));
  report["eq2_defined"] = run.estimates.eq2_defined;

  const fs::path dir = resolve_out_dir(a.out_dir, cfg.output_dir);
  io::write_file_atomic(dir / "figure11.csv",
                        io::figure11_csv(figure11_table(run.estimates, run.optics, run.inertial, track.position)));
  io::write_file_atomic(dir / "accuracy.json", io::dump(report));
  std::cout << io::dump(io::to_json(acc));
  return 0;
}

struct DetectArgs {
  std::string config, optics_from, inertial_from, object, hold, out;
  bool playback{false};
  bool series{false};
};

int cmd_detect(const DetectArgs& a) {
  ScenarioRun run;
  DetectorConfig det;
  if (!a.config.empty()) {
    if (!a.optics_from.empty() || !a.inertial_from.empty()) {
      throw ConfigError("detect: --config cannot be combined with --optics-from/--inertial-from");
    }
    const io::RunConfig cfg = io::load_run_config(a.config);
    det = cfg.detector;
    ScenePoint object = cfg.scenario.object;
    if (!a.object.empty()) object.position = parse_vec3_arg(a.object, "object");
    const KinematicTrack live = generate(cfg.scenario);
    if (a.playback) {
      Vec3 hold = cfg.hold_position.value_or(live.position.front());
      if (!a.hold.empty()) hold = parse_vec3_arg(a.hold, "hold");
      run = run_playback(make_playback(live, hold), object, cfg.observables, cfg.gravity);
    } else {
      run = run_track(live, object, cfg.observables, cfg.gravity);
    }
  } else {
    if (a.optics_from.empty() || a.inertial_from.empty()) {
      throw ConfigError("detect: give --config, or both --optics-from and --inertial-from");
    }
    if (a.playback) throw ConfigError("detect: --playback requires --config");
    const Source optics = load_source(a.optics_from);
    const Source body = load_source(a.inertial_from);
    std::optional<ScenePoint> object = optics.object;
    if (!a.object.empty()) object = ScenePoint{parse_vec3_arg(a.object, "object"), "object"};
    if (!object) throw ConfigError("detect: --object is required when --optics-from is a track file");
    const io::RunConfig& cfg = is_track_file(a.optics_from) ? body.config : optics.config;
    det = cfg.detector;
    run = run_mismatched(optics.track, body.track, *object, cfg.observables, cfg.gravity);
  }
  const DetectionReport rep = detect(run.optics, run.inertial, det);
  const std::string text = io::dump(io::to_json(rep, a.series));
  if (a.out.empty()) {
    std::cout << text;
  } else {
    io::write_file_atomic(a.out, text);
    std::cout << "verdict: " << to_string(rep.verdict) << " (" << rep.rule_fired << ")\n";
  }
  return 0;
}

struct SlopeArgs {
  std::string config, gravity, accel, accel_csv, normal, normal_csv, out;
  std::optional<double> tilt_deg;
  std::size_t samples{2};
  double rate{100.0};
};

int cmd_slope(const SlopeArgs& a) {
  Vec3 gravity = default_gravity();
  KinematicTrack body;
  std::optional<Vec3> config_normal;
  if (!a.config.empty()) {
    const io::RunConfig cfg = io::load_run_config(a.config);
    gravity = cfg.gravity;
    body = generate(cfg.scenario);
    config_normal = cfg.surface_normal;
  } else if (!a.accel_csv.empty()) {
    auto [grid, acc] = io::read_vec3_csv(a.accel_csv, {"t", "ax", "ay", "az"});
    body.grid = grid;
    body.acceleration = std::move(acc);
  } else {
    if (a.samples < 2) throw ConfigError("slope: --samples must be >= 2");
    body.grid = TimeGrid{a.rate, a.samples, 0.0};
    body.grid.validate();
    body.acceleration.assign(a.samples, a.accel.empty() ? Vec3::Zero() : parse_vec3_arg(a.accel, "accel"));
  }
  if (!a.config.empty() && (!a.accel.empty() || !a.accel_csv.empty())) {
    throw ConfigError("slope: --config already defines the motion; drop --accel/--accel-csv");
  }
  const std::size_t n = body.grid.n_samples;
  if (body.position.empty()) body.position.assign(n, Vec3::Zero());
  if (body.velocity.empty()) body.velocity.assign(n, Vec3::Zero());
  if (!a.gravity.empty()) gravity = parse_vec3_arg(a.gravity, "gravity");

  const int normal_sources = int(!a.normal.empty()) + int(!a.normal_csv.empty()) + int(a.tilt_deg.has_value());
  if (normal_sources > 1) throw ConfigError("slope: give at most one of --normal, --normal-csv, --tilt-deg");
  SupportStream support;
  if (!a.normal_csv.empty()) {
    auto [grid, normals] = io::read_vec3_csv(a.normal_csv, {"t", "nx", "ny", "nz"});
    if (!(grid == body.grid)) throw AlignmentError("slope: normal series grid differs from the motion grid");
    for (auto& nrm : normals) {
      if (nrm.norm() == 0.0) throw ConfigError("slope: zero surface normal in " + a.normal_csv);
      nrm.normalize();
    }
    support = SupportStream{grid, normals};
  } else if (a.tilt_deg) {
    support = tilted_support(body.grid, *a.tilt_deg * std::numbers::pi / 180.0);
  } else {
    support = constant_support(body.grid, a.normal.empty() ? config_normal.value_or(Vec3::UnitZ())
                                                           : parse_vec3_arg(a.normal, "normal"));
  }

  const InertialStream inertial = project_inertial(body, gravity);
  const SlopeEstimate slope = slope_invariant(inertial, support);
  std::ostringstream os;
  io::write_slope_csv(os, body.grid, inertial, support, slope);
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    io::write_file_atomic(a.out, os.str());
    std::cout << "wrote " << a.out << "\n";
  }
  return 0;
}

int cmd_demo(std::uint64_t seed, const std::string& out_dir) {
  const demo::DemoOutput output = demo::run(seed);
  const fs::path dir = out_dir.empty() ? io::default_output_dir() / "demo" : fs::path(out_dir);
  demo::write_tree(output, dir);
  std::cout << demo::format_table(output);
  std::cout << "wrote " << output.files.size() << " files under " << dir.string() << "\n";
  return output.all_passed() ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-array distance and orientation invariants"};
  app.require_subcommand(1);

  std::string gen_config, gen_out;
  auto* gen = app.add_subcommand("generate", "Synthesize a trajectory and write it as CSV");
  gen->add_option("-c,--config", gen_config, "Run configuration file")->required();
  gen->add_option("-o,--out", gen_out, "Output CSV (default <output dir>/track.csv)");

  AnalyzeArgs an;
  double an_tol = 0.0, an_reach = 0.0;
  auto* analyze = app.add_subcommand("analyze", "Distance estimates, accuracy and the per-sample table");
  analyze->add_option("-c,--config", an.config, "Run configuration file");
  analyze->add_option("-t,--track", an.track, "Track CSV instead of a configuration");
  analyze->add_option("--object", an.object, "Object position x,y,z [m]");
  auto* tol_opt = analyze->add_option("--tolerance", an_tol, "Relative accuracy tolerance");
  auto* reach_opt = analyze->add_option("--reach", an_reach, "Reach threshold [m]");
  analyze->add_option("--rates", an.rates, "Bearing-rate mode: automatic|kinematic|numeric");
  analyze->add_option("-o,--out-dir", an.out_dir, "Output directory");

  DetectArgs de;
  auto* det = app.add_subcommand("detect", "Classify paired optical/inertial streams as live or simulated");
  det->add_option("-c,--config", de.config, "Run configuration file (live or --playback)");
  det->add_flag("--playback", de.playback, "Replay the configured motion to a stationary observer");
  det->add_option("--hold", de.hold, "Playback hold position x,y,z [m]");
  det->add_option("--optics-from", de.optics_from, "Config or track CSV that generates the optics");
  det->add_option("--inertial-from", de.inertial_from, "Config or track CSV that generates the body motion");
  det->add_option("--object", de.object, "Object position x,y,z [m]");
  det->add_flag("--series", de.series, "Include per-sample residual series");
  det->add_option("-o,--out", de.out, "Output JSON (default stdout)");

  SlopeArgs sl;
  double sl_tilt = 0.0;
  auto* slope = app.add_subcommand("slope", "Direction of balance vs. surface of support");
  slope->add_option("-c,--config", sl.config, "Run configuration (motion, gravity, surface_normal)");
  slope->add_option("--gravity", sl.gravity, "Gravity vector x,y,z [m/s^2]");
  slope->add_option("--accel", sl.accel, "Constant acceleration x,y,z [m/s^2]");
  slope->add_option("--accel-csv", sl.accel_csv, "Acceleration series CSV (t,ax,ay,az)");
  slope->add_option("--normal", sl.normal, "Constant surface normal x,y,z");
  slope->add_option("--normal-csv", sl.normal_csv, "Surface normal series CSV (t,nx,ny,nz)");
  auto* tilt_opt = slope->add_option("--tilt-deg", sl_tilt, "Ground tilt about +y [deg]");
  slope->add_option("--samples", sl.samples, "Sample count for constant inputs");
  slope->add_option("--rate", sl.rate, "Sample rate for constant inputs [Hz]");
  slope->add_option("-o,--out", sl.out, "Output CSV (default stdout)");

  std::uint64_t demo_seed = demo::kDefaultSeed;
  std::string demo_out;
  auto* dem = app.add_subcommand("demo", "Run the reference scenario suite and print a pass/fail table");
  dem->add_option("--seed", demo_seed, "Seed of the sway3d batch");
  dem->add_option("-o,--out-dir", demo_out, "Output directory (default <output dir>/demo)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_config, gen_out);
    if (*analyze) {
      if (*tol_opt) an.tolerance = an_tol;
      if (*reach_opt) an.reach = an_reach;
      return cmd_analyze(an);
    }
    if (*det) return cmd_detect(de);
    if (*slope) {
      if (*tilt_opt) sl.tilt_deg = sl_tilt;
      return cmd_slope(sl);
    }
    if (*dem) return cmd_demo(demo_seed, demo_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
