#pragma once

/**
 * @file demo.hpp
 * @brief The reference scenario suite: every generator family, the seeded
 * head-sway batch, playback and mismatched-replay pairings, and the slope
 * cases. Produces an in-memory file tree plus a pass/fail table; output bytes
 * depend only on the seed.
 */

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "garray/io/csv.hpp"
#include "garray/io/reports.hpp"
#include "garray/pipeline.hpp"

namespace garray::demo {

struct NamedScenario {
  std::string id;
  ScenarioConfig config;
};

inline constexpr std::size_t kSwayBatch = 10;
inline constexpr std::uint64_t kDefaultSeed = 20150101;

/// Rectilinear pass, planar sway, tangential orbit and the seeded sway3d batch.
inline std::vector<NamedScenario> scenarios(std::uint64_t seed = kDefaultSeed) {
  std::vector<NamedScenario> out;

  ScenarioConfig rect;
  rect.kind = ScenarioKind::rectilinear;
  rect.duration = 2.0;
  rect.speed = 1.0;
  rect.direction = Vec3::UnitX();
  rect.object.position = Vec3(3.0, 4.0, 0.0);
  out.push_back({"rectilinear", rect});

  ScenarioConfig planar;
  planar.kind = ScenarioKind::planar_sway;
  planar.duration = 10.0;
  planar.start = Vec3(0.0, 0.0, 1.2);
  planar.amplitude = Vec3(0.05, 0.03, 0.0);
  planar.frequency = Vec3(0.4, 0.7, 0.0);
  planar.object.position = Vec3(0.6, 0.0, 1.2);
  out.push_back({"planar_sway", planar});

  ScenarioConfig orbit;
  orbit.kind = ScenarioKind::tangential_orbit;
  orbit.duration = 10.0;
  orbit.speed = 1.0;
  orbit.orbit_radius = 2.0;
  out.push_back({"tangential_orbit", orbit});

  for (std::size_t i = 0; i < kSwayBatch; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "sway3d_%02zu", i);
    out.push_back({id, random_sway3d(seed + i)});
  }
  return out;
}

struct DemoCheck {
  std::string name;
  bool passed{false};
  std::string detail;
};

struct DemoOutput {
  std::vector<DemoCheck> checks;
  std::map<std::string, std::string> files;  ///< relative path -> bytes

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

namespace detail {

inline double max_relative_error(const EstimateSeries& est, const Series& truth) {
  double worst = 0.0;
  for (std::size_t k = 0; k < est.size(); ++k) {
    if (est.valid[k]) worst = std::max(worst, std::abs(est.value[k] - truth[k]) / truth[k]);
  }
  return worst;
}

inline std::string fmt(double x) { return io::format_double(x); }

}  // namespace detail

inline DemoOutput run(std::uint64_t seed = kDefaultSeed) {
  DemoOutput out;
  const auto suite = scenarios(seed);
  io::json summary;
  summary["seed"] = seed;

  double worst_exact = 0.0;
  double worst_numeric_fraction = 1.0;
  double worst_eq1_sway = 0.0;
  std::size_t live_ok = 0, playback_ok = 0, indeterminate = 0, n_detect = 0;

  std::map<std::string, KinematicTrack> sway_tracks;

  for (const auto& [id, config] : suite) {
    const ScenarioRun run = run_scenario(config);
    ScenarioConfig numeric_cfg = config;
    numeric_cfg.derivatives = DerivativeMode::numeric;
    const ScenarioRun numeric = run_scenario(numeric_cfg);

    const AccuracyReport acc = accuracy(run.estimates, kDefaultTolerance, id);
    const AccuracyReport acc_numeric = accuracy(numeric.estimates, kDefaultTolerance, id + "/numeric");
    const ReachJudgment reach = reach_judgment(run.estimates, 0.6);

    worst_exact = std::max(worst_exact, detail::max_relative_error(run.estimates.d_eq3, run.estimates.d_truth));
    worst_numeric_fraction =
        std::min(worst_numeric_fraction, acc_numeric.get(Estimator::eq3).accurate_fraction.value_or(0.0));
    if (config.kind == ScenarioKind::sway3d) {
      worst_eq1_sway = std::max(worst_eq1_sway, acc.get(Estimator::eq1).accurate_fraction.value_or(0.0));
      sway_tracks.emplace(id, run.observer);
    }

    const DetectionReport live = detect(run.optics, run.inertial);
    const PlaybackPair pair = make_playback(run.observer, run.observer.position.front());
    const ScenarioRun replay = run_playback(pair, config.object);
    const DetectionReport replayed = detect(replay.optics, replay.inertial);
    n_detect += 2;
    live_ok += live.verdict == Verdict::live ? 1 : 0;
    playback_ok += replayed.verdict == Verdict::simulated ? 1 : 0;
    indeterminate += (live.verdict == Verdict::indeterminate ? 1 : 0) +
                     (replayed.verdict == Verdict::indeterminate ? 1 : 0);

    io::json acc_json;
    acc_json["analytic"] = io::to_json(acc);
    acc_json["numeric"] = io::to_json(acc_numeric);
    acc_json["reach"] = io::to_json(reach);
    acc_json["exploration"] = io::to_json(exploration_summary(run.observer));
    out.files[id + "/track.csv"] = io::track_csv(run.observer);
    out.files[id + "/figure11.csv"] =
        io::figure11_csv(figure11_table(run.estimates, run.optics, run.inertial, run.observer.position));
    out.files[id + "/accuracy.json"] = io::dump(acc_json);
    out.files[id + "/detection_live.json"] = io::dump(io::to_json(live));
    out.files[id + "/detection_playback.json"] = io::dump(io::to_json(replayed));

    summary["scenarios"][id] = {
        {"eq1_accurate_fraction", acc.get(Estimator::eq1).accurate_fraction.value_or(0.0)},
        {"eq3_accurate_fraction", acc.get(Estimator::eq3).accurate_fraction.value_or(0.0)},
        {"eq3_numeric_accurate_fraction", acc_numeric.get(Estimator::eq3).accurate_fraction.value_or(0.0)},
        {"live_verdict", to_string(live.verdict)},
        {"playback_verdict", to_string(replayed.verdict)},
    };
  }

  // Optics of one sway recording paired with the inertial stream of another.
  const auto& a = sway_tracks.at("sway3d_00");
  const auto& b = sway_tracks.at("sway3d_01");
  const ScenePoint object_a = suite[3].config.object;
  const ScenarioRun mixed = run_mismatched(a, b, object_a);
  const DetectionReport mismatch = detect(mixed.optics, mixed.inertial);
  out.files["mismatched/detection.json"] = io::dump(io::to_json(mismatch));
  ++n_detect;
  indeterminate += mismatch.verdict == Verdict::indeterminate ? 1 : 0;

  // Slope of the ground from gravitoinertial force and support normal.
  struct SlopeCase {
    std::string id;
    Vec3 acceleration;
    double tilt;
    double expected;
  };
  const double ten_deg = 10.0 * std::numbers::pi / 180.0;
  const std::vector<SlopeCase> slope_cases{
      {"level_static", Vec3::Zero(), 0.0, 0.0},
      {"incline_10deg", Vec3::Zero(), ten_deg, ten_deg},
      {"level_accelerating", Vec3(2.0, 0.0, 0.0), 0.0, std::atan2(2.0, 9.81)},
  };
  double worst_slope = 0.0;
  for (const auto& c : slope_cases) {
    KinematicTrack still;
    still.grid = TimeGrid{100.0, 11, 0.0};
    still.position.assign(11, Vec3::Zero());
    still.velocity.assign(11, Vec3::Zero());
    still.acceleration.assign(11, c.acceleration);
    const InertialStream inertial = project_inertial(still);
    const SupportStream support = tilted_support(still.grid, c.tilt);
    const SlopeEstimate slope = slope_invariant(inertial, support);
    worst_slope = std::max(worst_slope, std::abs(slope.slope_angle.front() - c.expected));
    std::ostringstream os;
    io::write_slope_csv(os, still.grid, inertial, support, slope);
    out.files["slope/" + c.id + ".csv"] = os.str();
  }

  out.checks = {
      {"eq3 exact on analytic tracks", worst_exact < 1e-6, "max relative error " + detail::fmt(worst_exact)},
      {"eq3 within 5% with numeric derivatives", worst_numeric_fraction == 1.0,
       "min accurate fraction " + detail::fmt(worst_numeric_fraction)},
      {"eq1 fails on 3D sway", worst_eq1_sway < 0.20, "max eq1 accurate fraction " + detail::fmt(worst_eq1_sway)},
      {"live scenarios classified live", live_ok == suite.size(),
       std::to_string(live_ok) + "/" + std::to_string(suite.size())},
      {"playback classified simulated", playback_ok == suite.size(),
       std::to_string(playback_ok) + "/" + std::to_string(suite.size())},
      {"mismatched replay classified simulated", mismatch.verdict == Verdict::simulated,
       std::string(to_string(mismatch.verdict)) + " via " + mismatch.rule_fired},
      {"no indeterminate verdicts", indeterminate == 0,
       std::to_string(indeterminate) + " of " + std::to_string(n_detect)},
      {"slope invariant", worst_slope < 1e-9, "max error " + detail::fmt(worst_slope) + " rad"},
  };

  io::json checks = io::json::array();
  for (const auto& c : out.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  summary["checks"] = checks;
  out.files["summary.json"] = io::dump(summary);
  return out;
}

inline void write_tree(const DemoOutput& output, const std::filesystem::path& dir) {
  for (const auto& [rel, bytes] : output.files) io::write_file_atomic(dir / rel, bytes);
}

inline std::string format_table(const DemoOutput& output) {
  std::ostringstream os;
  for (const auto& c : output.checks) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";
  }
  return os.str();
}

}  // namespace garray::demo
