#pragma once

// JSON forms of the structured reports, and atomic file output.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "garray/analysis.hpp"
#include "garray/detector.hpp"
#include "garray/io/csv.hpp"

namespace garray::io {

using nlohmann::json;

namespace detail {

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace detail

inline json to_json(const AccuracyReport& report) {
  json j;
  j["scenario_id"] = report.scenario_id;
  j["tolerance"] = report.tolerance;
  json per = json::object();
  for (Estimator e : kAllEstimators) {
    const auto& a = report.get(e);
    per[to_string(e)] = {
        {"valid_samples", a.valid_samples},
        {"total_samples", a.total_samples},
        {"valid_fraction", a.valid_fraction},
        {"accurate_fraction", detail::optional_number(a.accurate_fraction)},
        {"mean_abs_relative_error", detail::optional_number(a.mean_abs_relative_error)},
    };
  }
  j["estimators"] = per;
  return j;
}

inline json to_json(const ReachJudgment& reach) {
  json j;
  j["reach_threshold_m"] = reach.reach_threshold;
  j["tie_rule"] = "distance <= threshold is within reach";
  std::size_t within = 0;
  for (bool b : reach.truth) within += b ? 1 : 0;
  j["truth_within_fraction"] =
      reach.truth.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(reach.truth.size());
  json agree = json::object();
  for (Estimator e : kAllEstimators) agree[to_string(e)] = detail::optional_number(reach.agreement(e));
  j["agreement_with_truth"] = agree;
  return j;
}

inline json to_json(const ExplorationSummary& s) {
  return {
      {"amplitude_m", {s.amplitude.x(), s.amplitude.y(), s.amplitude.z()}},
      {"mean_speed_mps", s.mean_speed},
      {"max_speed_mps", s.max_speed},
      {"mean_acceleration_mps2", s.mean_acceleration},
      {"max_acceleration_mps2", s.max_acceleration},
  };
}

inline json to_json(const DetectionReport& rep, bool include_series = false) {
  json j;
  j["verdict"] = to_string(rep.verdict);
  j["rule_fired"] = rep.rule_fired;
  j["flow_exceed_fraction"] = rep.flow_exceed_fraction;
  j["scale_exceed_fraction"] = rep.scale_exceed_fraction;
  j["informative_fraction"] = rep.informative_fraction;
  double max_flow = 0.0, max_scale = 0.0;
  for (double f : rep.flow_residual) max_flow = std::max(max_flow, f);
  for (double s : rep.scale_residual) {
    if (std::isfinite(s)) max_scale = std::max(max_scale, s);
  }
  j["max_flow_residual_radps"] = max_flow;
  j["max_scale_residual"] = max_scale;
  j["thresholds"] = {
      {"flow_threshold_radps", rep.config.flow_threshold},
      {"scale_threshold", rep.config.scale_threshold},
      {"window_s", rep.config.window},
      {"verdict_fraction", rep.config.verdict_fraction},
      {"min_informative_fraction", rep.config.min_informative_fraction},
  };
  if (include_series) {
    json scale = json::array();
    for (double s : rep.scale_residual) scale.push_back(std::isfinite(s) ? json(s) : json(nullptr));
    j["flow_residual"] = rep.flow_residual;
    j["scale_residual"] = scale;
  }
  return j;
}

/// Writes @p content to a sibling temp file, then renames it over @p path.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Default output directory: $GARRAY_OUTPUT_DIR, else the working directory.
inline std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("GARRAY_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

}  // namespace garray::io
