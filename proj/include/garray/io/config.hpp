#pragma once

/**
 * @file config.hpp
 * @brief Run configuration files.
 *
 * One `key = value` pair per line; `#` starts a comment. Vectors are written
 * as three comma-separated numbers. Units are part of the key name. Unknown
 * or repeated keys are errors.
 *
 *   kind = sway3d
 *   duration_s = 10
 *   sample_rate_hz = 100
 *   object_m = 0.6, 0, 1.2
 *   amplitude_m = 0.05, 0.03, 0.02
 */

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "garray/detector.hpp"
#include "garray/generators.hpp"
#include "garray/io/csv.hpp"
#include "garray/observables.hpp"

namespace garray::io {

struct RunConfig {
  ScenarioConfig scenario;
  ObservableConfig observables;
  Vec3 gravity{default_gravity()};
  double tolerance{kDefaultTolerance};
  double reach_threshold{0.6};  ///< [m]
  DetectorConfig detector;
  std::optional<Vec3> hold_position;  ///< playback hold, defaults to the first live position
  Vec3 surface_normal{Vec3::UnitZ()};
  std::string output_dir;  ///< empty: use the command line / environment default
};

namespace detail {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline Vec3 parse_vec3(const std::string& value, const std::string& where) {
  const auto parts = split_csv_line(value);
  if (parts.size() != 3) throw ParseError(where + ": expected three comma-separated numbers");
  return Vec3(parse_double(parts[0], where), parse_double(parts[1], where), parse_double(parts[2], where));
}

template <typename Enum>
Enum parse_enum(const std::string& value, const std::string& where,
                std::initializer_list<std::pair<const char*, Enum>> choices) {
  std::string allowed;
  for (const auto& [name, e] : choices) {
    if (value == name) return e;
    allowed += (allowed.empty() ? "" : "|") + std::string(name);
  }
  throw ParseError(where + ": invalid value '" + value + "', expected " + allowed);
}

}  // namespace detail

/// Parses a configuration. Relative paths (samples_csv) resolve against @p base_dir.
inline RunConfig parse_run_config(std::istream& in, const std::string& source,
                                  const std::filesystem::path& base_dir = {}) {
  RunConfig cfg;
  auto& sc = cfg.scenario;
  sc.object.label = "object";

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto num = [](double& dst) -> Setter {
    return [&dst](const std::string& v, const std::string& w) { dst = parse_double(v, w); };
  };
  auto vec = [](Vec3& dst) -> Setter {
    return [&dst](const std::string& v, const std::string& w) { dst = detail::parse_vec3(v, w); };
  };

  const std::map<std::string, Setter> keys{
      {"kind",
       [&](const std::string& v, const std::string& w) {
         sc.kind = detail::parse_enum<ScenarioKind>(v, w,
                                                    {{"rectilinear", ScenarioKind::rectilinear},
                                                     {"planar_sway", ScenarioKind::planar_sway},
                                                     {"sway3d", ScenarioKind::sway3d},
                                                     {"tangential_orbit", ScenarioKind::tangential_orbit},
                                                     {"custom_samples", ScenarioKind::custom_samples}});
       }},
      {"duration_s", num(sc.duration)},
      {"sample_rate_hz", num(sc.sample_rate)},
      {"t0_s", num(sc.t0)},
      {"object_m", vec(sc.object.position)},
      {"object_label", [&](const std::string& v, const std::string&) { sc.object.label = v; }},
      {"start_m", vec(sc.start)},
      {"speed_mps", num(sc.speed)},
      {"direction", vec(sc.direction)},
      {"amplitude_m", vec(sc.amplitude)},
      {"frequency_hz", vec(sc.frequency)},
      {"phase_rad", vec(sc.phase)},
      {"orbit_radius_m", num(sc.orbit_radius)},
      {"orbit_phase_rad", num(sc.orbit_phase)},
      {"noise_sigma_m", num(sc.noise_sigma)},
      {"rng_seed",
       [&](const std::string& v, const std::string& w) {
         std::uint64_t seed = 0;
         auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
         if (ec != std::errc{} || ptr != v.data() + v.size()) throw ParseError(w + ": rng_seed must be an unsigned integer");
         sc.rng_seed = seed;
       }},
      {"derivatives",
       [&](const std::string& v, const std::string& w) {
         sc.derivatives = detail::parse_enum<DerivativeMode>(
             v, w, {{"analytic", DerivativeMode::analytic}, {"numeric", DerivativeMode::numeric}});
       }},
      {"samples_csv",
       [&](const std::string& v, const std::string&) {
         const std::filesystem::path p = std::filesystem::path(v).is_absolute() ? std::filesystem::path(v) : base_dir / v;
         auto [grid, positions] = read_vec3_csv(p.string(), {"t", "px", "py", "pz"});
         sc.samples = std::move(positions);
         sc.sample_rate = grid.sample_rate;
         sc.t0 = grid.t0;
       }},
      {"gravity_mps2", vec(cfg.gravity)},
      {"eps_v_mps", num(cfg.observables.eps_v)},
      {"eps_q_radps", num(cfg.observables.eps_q)},
      {"planarity_tol", num(cfg.observables.planarity_tol)},
      {"rates",
       [&](const std::string& v, const std::string& w) {
         cfg.observables.rates = detail::parse_enum<RateMode>(
             v, w,
             {{"automatic", RateMode::automatic}, {"kinematic", RateMode::kinematic}, {"numeric", RateMode::numeric}});
       }},
      {"tolerance", num(cfg.tolerance)},
      {"reach_threshold_m", num(cfg.reach_threshold)},
      {"detector_flow_threshold_radps", num(cfg.detector.flow_threshold)},
      {"detector_scale_threshold", num(cfg.detector.scale_threshold)},
      {"detector_window_s", num(cfg.detector.window)},
      {"detector_verdict_fraction", num(cfg.detector.verdict_fraction)},
      {"detector_min_informative_fraction", num(cfg.detector.min_informative_fraction)},
      {"hold_m",
       [&](const std::string& v, const std::string& w) { cfg.hold_position = detail::parse_vec3(v, w); }},
      {"surface_normal", vec(cfg.surface_normal)},
      {"output_dir", [&](const std::string& v, const std::string&) { cfg.output_dir = v; }},
  };

  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ParseError(where + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(where + ": duplicate key '" + key + "'");
    if (value.empty()) throw ParseError(where + ": empty value for key '" + key + "'");
    it->second(value, where + " (key '" + key + "')");
  }

  if (sc.kind == ScenarioKind::custom_samples && sc.samples.empty()) {
    throw ParseError(source + ": kind custom_samples requires key 'samples_csv'");
  }
  try {
    sc.validate();
    cfg.detector.validate();
  } catch (const ConfigError& e) {
    throw ParseError(source + ": " + e.what());
  }
  if (!std::isfinite(cfg.tolerance) || cfg.tolerance < 0.0) throw ParseError(source + ": key 'tolerance' must be >= 0");
  if (!(cfg.reach_threshold > 0.0)) throw ParseError(source + ": key 'reach_threshold_m' must be > 0");
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse_run_config(in, path, std::filesystem::path(path).parent_path());
}

}  // namespace garray::io
