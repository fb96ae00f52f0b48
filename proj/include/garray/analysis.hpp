#pragma once

/**
 * @file analysis.hpp
 * @brief Accuracy statistics, reach judgments, plot-ready per-sample tables
 * and movement descriptors.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "garray/invariants.hpp"

namespace garray {

struct EstimatorAccuracy {
  std::size_t valid_samples{0};
  std::size_t total_samples{0};
  double valid_fraction{0.0};
  /// Absent when no sample is valid.
  std::optional<double> accurate_fraction;
  std::optional<double> mean_abs_relative_error;

  bool empty() const { return valid_samples == 0; }
};

struct AccuracyReport {
  std::string scenario_id;
  double tolerance{0.05};
  std::array<EstimatorAccuracy, 4> per_estimator{};  ///< indexed like kAllEstimators

  const EstimatorAccuracy& get(Estimator e) const { return per_estimator[static_cast<std::size_t>(e)]; }
};

inline constexpr double kDefaultTolerance = 0.05;

inline EstimatorAccuracy accuracy_of(const EstimateSeries& est, const Series& truth, double tolerance) {
  EstimatorAccuracy acc;
  acc.total_samples = est.size();
  std::size_t accurate = 0;
  double err_sum = 0.0;
  for (std::size_t k = 0; k < est.size(); ++k) {
    if (!est.valid[k]) continue;
    ++acc.valid_samples;
    const double rel = std::abs(est.value[k] - truth[k]) / truth[k];
    err_sum += rel;
    if (rel <= tolerance) ++accurate;
  }
  if (acc.total_samples > 0) {
    acc.valid_fraction = static_cast<double>(acc.valid_samples) / static_cast<double>(acc.total_samples);
  }
  if (acc.valid_samples > 0) {
    const auto v = static_cast<double>(acc.valid_samples);
    acc.accurate_fraction = static_cast<double>(accurate) / v;
    acc.mean_abs_relative_error = err_sum / v;
  }
  return acc;
}

/// Fraction of valid samples whose relative error is within @p tolerance,
/// per estimator. Denominators are valid samples only.
inline AccuracyReport accuracy(const DistanceEstimateSeries& est, double tolerance = kDefaultTolerance,
                               std::string scenario_id = {}) {
  if (!std::isfinite(tolerance) || tolerance < 0.0) {
    throw ConfigError("accuracy: tolerance must be finite and >= 0");
  }
  AccuracyReport report;
  report.scenario_id = std::move(scenario_id);
  report.tolerance = tolerance;
  for (Estimator e : kAllEstimators) {
    report.per_estimator[static_cast<std::size_t>(e)] = accuracy_of(est.get(e), est.d_truth, tolerance);
  }
  return report;
}

// ---------------------------------------------------------------------------

/// Within reach means D <= threshold (ties count as within reach).
struct ReachJudgment {
  double reach_threshold{0.0};
  std::vector<bool> truth;
  /// Per estimator; empty optional where the estimate is invalid.
  std::array<std::vector<std::optional<bool>>, 4> verdicts;

  const std::vector<std::optional<bool>>& get(Estimator e) const { return verdicts[static_cast<std::size_t>(e)]; }

  /// Share of valid samples whose verdict equals the truth verdict.
  std::optional<double> agreement(Estimator e) const {
    std::size_t valid = 0, same = 0;
    const auto& v = get(e);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k]) continue;
      ++valid;
      if (*v[k] == truth[k]) ++same;
    }
    if (valid == 0) return std::nullopt;
    return static_cast<double>(same) / static_cast<double>(valid);
  }
};

inline ReachJudgment reach_judgment(const DistanceEstimateSeries& est, double threshold) {
  if (!std::isfinite(threshold) || !(threshold > 0.0)) {
    throw ConfigError("reach_judgment: threshold must be finite and > 0");
  }
  ReachJudgment out;
  out.reach_threshold = threshold;
  out.truth.resize(est.d_truth.size());
  for (std::size_t k = 0; k < est.d_truth.size(); ++k) out.truth[k] = est.d_truth[k] <= threshold;
  for (Estimator e : kAllEstimators) {
    const auto& s = est.get(e);
    auto& v = out.verdicts[static_cast<std::size_t>(e)];
    v.resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s.valid[k]) v[k] = s.value[k] <= threshold;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

/// One plot-ready row: trajectory, optic/inertial components and every
/// distance estimate for a single sample.
struct Figure11Row {
  double t{0.0};
  Vec3 position{Vec3::Zero()};
  double speed{0.0};
  double alpha{0.0};
  double q{0.0};
  double d_truth{0.0};
  double d_eq1{0.0}, d_eq2{0.0}, d_eq3{0.0}, d_eq5{0.0};
  bool valid_eq1{false}, valid_eq2{false}, valid_eq3{false}, valid_eq5{false};
};

using Figure11Table = std::vector<Figure11Row>;

/// @p observer_positions are the positions of the body the inertial stream describes.
inline Figure11Table figure11_table(const DistanceEstimateSeries& est, const OpticalStream& optics,
                                    const InertialStream& inertial, std::span<const Vec3> observer_positions) {
  detail::check_aligned(optics, inertial, "figure11_table");
  if (!(est.grid == optics.grid) || observer_positions.size() != est.grid.n_samples) {
    throw AlignmentError("figure11_table: estimate grid differs from the streams");
  }
  Figure11Table rows(est.grid.n_samples);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto& r = rows[k];
    r.t = est.grid.time(k);
    r.position = observer_positions[k];
    r.speed = inertial.speed_v[k];
    r.alpha = optics.alpha[k];
    r.q = optics.q_norm[k];
    r.d_truth = est.d_truth[k];
    r.d_eq1 = est.d_eq1.value[k];
    r.d_eq2 = est.d_eq2.value[k];
    r.d_eq3 = est.d_eq3.value[k];
    r.d_eq5 = est.d_eq5.value[k];
    r.valid_eq1 = est.d_eq1.valid[k];
    r.valid_eq2 = est.d_eq2.valid[k];
    r.valid_eq3 = est.d_eq3.valid[k];
    r.valid_eq5 = est.d_eq5.valid[k];
  }
  return rows;
}

/// Rebuilds the estimate series held in a table (used after re-import).
inline DistanceEstimateSeries estimates_from_table(const Figure11Table& rows, const TimeGrid& grid,
                                                   const ScenePoint& object = {}) {
  if (rows.size() != grid.n_samples) throw InputShapeError("estimates_from_table: row count differs from grid");
  DistanceEstimateSeries est;
  est.grid = grid;
  est.object = object;
  const std::size_t n = rows.size();
  for (auto* s : {&est.d_eq1, &est.d_eq2, &est.d_eq3, &est.d_eq5}) *s = detail::invalid_series(n);
  est.d_truth.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = rows[k];
    est.d_truth[k] = r.d_truth;
    est.d_eq1.value[k] = r.d_eq1;
    est.d_eq1.valid[k] = r.valid_eq1;
    est.d_eq2.value[k] = r.d_eq2;
    est.d_eq2.valid[k] = r.valid_eq2;
    est.d_eq3.value[k] = r.d_eq3;
    est.d_eq3.valid[k] = r.valid_eq3;
    est.d_eq5.value[k] = r.d_eq5;
    est.d_eq5.valid[k] = r.valid_eq5;
    est.eq2_defined = est.eq2_defined || r.valid_eq2;
  }
  return est;
}

// ---------------------------------------------------------------------------

struct ExplorationSummary {
  Vec3 amplitude{Vec3::Zero()};  ///< peak-to-peak excursion per axis [m]
  double mean_speed{0.0}, max_speed{0.0};
  double mean_acceleration{0.0}, max_acceleration{0.0};
};

namespace detail {

// Extremum of the parabola through three equally spaced samples centred on
// the middle one. Recovers peaks that fall between samples.
inline double refined_extremum(double prev, double mid, double next) {
  const double curvature = prev - 2.0 * mid + next;
  if (curvature == 0.0) return mid;
  const double delta = 0.5 * (prev - next) / curvature;
  return mid - 0.25 * (prev - next) * delta;
}

}  // namespace detail

/// Movement descriptors: excursion, speed and acceleration magnitude.
inline ExplorationSummary exploration_summary(const KinematicTrack& track) {
  track.validate();
  ExplorationSummary s;
  const std::size_t n = track.size();
  for (int ax = 0; ax < 3; ++ax) {
    double lo = track.position[0][ax], hi = lo;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = track.position[k][ax];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      if (k == 0 || k + 1 == n) continue;
      const double prev = track.position[k - 1][ax], next = track.position[k + 1][ax];
      if ((x > prev && x >= next) || (x < prev && x <= next)) {
        const double ext = detail::refined_extremum(prev, x, next);
        lo = std::min(lo, ext);
        hi = std::max(hi, ext);
      }
    }
    s.amplitude[ax] = hi - lo;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double v = track.velocity[k].norm();
    const double a = track.acceleration[k].norm();
    s.mean_speed += v;
    s.mean_acceleration += a;
    s.max_speed = std::max(s.max_speed, v);
    s.max_acceleration = std::max(s.max_acceleration, a);
  }
  s.mean_speed /= static_cast<double>(n);
  s.mean_acceleration /= static_cast<double>(n);
  return s;
}

}  // namespace garray
