#pragma once

/**
 * @file invariants.hpp
 * @brief Distance and orientation parameters that exist only across energy
 * arrays: optical bearing kinematics combined with the observer's speed, and
 * the gravitoinertial direction combined with the support normal.
 *
 * Estimators (all nonnegative, in metres):
 *   rectilinear  D = V sin(alpha) / |alpha_dot|
 *   planar       D = V sin(alpha) / |theta_dot|
 *   general 3D   D = V |sin(alpha)| / Q,      Q = |i x di/dt|
 *   tangential   D = V / Q
 *
 * Samples whose inputs are undefined are flagged invalid and hold NaN; they
 * are never interpolated.
 */

#include <cmath>
#include <optional>
#include <span>

#include "garray/observables.hpp"

namespace garray {

/// One estimator's output: value is NaN wherever valid is false.
struct EstimateSeries {
  Series value;
  Flags valid;

  std::size_t size() const { return value.size(); }
  std::size_t valid_count() const {
    std::size_t c = 0;
    for (bool v : valid) c += v ? 1 : 0;
    return c;
  }
};

enum class Estimator { eq1, eq2, eq3, eq5 };

inline const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::eq1: return "eq1";
    case Estimator::eq2: return "eq2";
    case Estimator::eq3: return "eq3";
    case Estimator::eq5: return "eq5";
  }
  return "unknown";
}

inline constexpr Estimator kAllEstimators[] = {Estimator::eq1, Estimator::eq2, Estimator::eq3, Estimator::eq5};

struct DistanceEstimateSeries {
  TimeGrid grid;
  EstimateSeries d_eq1, d_eq2, d_eq3, d_eq5;
  Series d_truth;  ///< |position - object| of the body that actually moved
  ScenePoint object;
  /// False when the bearing set is not planar (planar estimator undefined).
  bool eq2_defined{false};

  const EstimateSeries& get(Estimator e) const {
    switch (e) {
      case Estimator::eq1: return d_eq1;
      case Estimator::eq2: return d_eq2;
      case Estimator::eq3: return d_eq3;
      case Estimator::eq5: return d_eq5;
    }
    return d_eq3;
  }
};

namespace detail {

inline void check_aligned(const OpticalStream& optics, const InertialStream& inertial, const char* who) {
  if (!(optics.grid == inertial.grid) || optics.q_norm.size() != inertial.speed_v.size()) {
    throw AlignmentError(std::string(who) + ": optical and inertial grids differ");
  }
}

inline EstimateSeries invalid_series(std::size_t n) { return EstimateSeries{Series(n, nan()), Flags(n, false)}; }

}  // namespace detail

/// Rectilinear estimator: V sin(alpha) / |alpha_dot|.
inline EstimateSeries estimate_eq1(const OpticalStream& optics, const InertialStream& inertial) {
  detail::check_aligned(optics, inertial, "estimate_eq1");
  const auto& cfg = optics.config;
  const std::size_t n = optics.q_norm.size();
  EstimateSeries out = detail::invalid_series(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double speed = inertial.speed_v[k];
    if (!optics.alpha_valid[k] || !optics.alpha_dot_valid[k] || !(speed >= cfg.eps_v)) continue;
    const double rate = std::abs(optics.alpha_dot[k]);
    if (!(rate >= cfg.eps_q)) continue;
    out.value[k] = speed * std::sin(optics.alpha[k]) / rate;
    out.valid[k] = true;
  }
  return out;
}

/// Planar estimator: V sin(alpha) / |theta_dot|. Throws RegimeError unless the
/// bearing set is planar.
inline EstimateSeries estimate_eq2(const OpticalStream& optics, const InertialStream& inertial) {
  detail::check_aligned(optics, inertial, "estimate_eq2");
  if (!optics.planar) {
    throw RegimeError("estimate_eq2: bearing motion is not planar; theta_dot is undefined");
  }
  const auto& cfg = optics.config;
  const std::size_t n = optics.q_norm.size();
  EstimateSeries out = detail::invalid_series(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double speed = inertial.speed_v[k];
    if (!optics.alpha_valid[k] || !optics.theta_dot_valid[k] || !(speed >= cfg.eps_v)) continue;
    const double rate = std::abs(optics.theta_dot[k]);
    if (!(rate >= cfg.eps_q)) continue;
    out.value[k] = speed * std::sin(optics.alpha[k]) / rate;
    out.valid[k] = true;
  }
  return out;
}

/**
 * General estimator: V |sin(alpha)| / Q. Where the body is still (V below
 * eps_v) the numerator vanishes whatever alpha is, so flow without motion
 * yields a valid distance of zero.
 */
inline EstimateSeries estimate_eq3(const OpticalStream& optics, const InertialStream& inertial) {
  detail::check_aligned(optics, inertial, "estimate_eq3");
  const auto& cfg = optics.config;
  const std::size_t n = optics.q_norm.size();
  EstimateSeries out = detail::invalid_series(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = optics.q_norm[k];
    if (!(q >= cfg.eps_q)) continue;
    const double speed = inertial.speed_v[k];
    if (!(speed >= cfg.eps_v)) {
      out.value[k] = 0.0;
      out.valid[k] = true;
    } else if (optics.alpha_valid[k]) {
      out.value[k] = speed * std::abs(std::sin(optics.alpha[k])) / q;
      out.valid[k] = true;
    }
  }
  return out;
}

/// Tangential estimator: V / Q. Exact only when alpha = pi/2.
inline EstimateSeries estimate_eq5(const OpticalStream& optics, const InertialStream& inertial) {
  detail::check_aligned(optics, inertial, "estimate_eq5");
  const auto& cfg = optics.config;
  const std::size_t n = optics.q_norm.size();
  EstimateSeries out = detail::invalid_series(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = optics.q_norm[k];
    if (!(q >= cfg.eps_q)) continue;
    const double speed = inertial.speed_v[k];
    out.value[k] = speed >= cfg.eps_v ? speed / q : 0.0;
    out.valid[k] = true;
  }
  return out;
}

/**
 * |sin(alpha)| / Q from optics alone (equal to sin(alpha) / |alpha_dot| on
 * rectilinear paths). The result is D / V in seconds: without the observer's
 * speed no metric distance can be recovered.
 */
inline EstimateSeries optics_only_ratio(const OpticalStream& optics) {
  const auto& cfg = optics.config;
  const std::size_t n = optics.alpha.size();
  EstimateSeries out = detail::invalid_series(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!optics.alpha_valid[k] || !(optics.q_norm[k] >= cfg.eps_q)) continue;
    out.value[k] = std::abs(std::sin(optics.alpha[k])) / optics.q_norm[k];
    out.valid[k] = true;
  }
  return out;
}

/// Ground-truth distance from each observer position to the object.
inline Series true_distance(std::span<const Vec3> positions, const ScenePoint& object) {
  Series d(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) d[k] = (positions[k] - object.position).norm();
  return d;
}

/**
 * Runs every estimator. @p observer is the body whose motion produced the
 * inertial stream; it supplies the ground truth.
 */
inline DistanceEstimateSeries estimate_distances(const OpticalStream& optics, const InertialStream& inertial,
                                                 const KinematicTrack& observer, const ScenePoint& object) {
  detail::check_aligned(optics, inertial, "estimate_distances");
  if (!(observer.grid == optics.grid)) throw AlignmentError("estimate_distances: observer grid differs");
  DistanceEstimateSeries out;
  out.grid = optics.grid;
  out.object = object;
  out.d_eq1 = estimate_eq1(optics, inertial);
  out.eq2_defined = optics.planar;
  out.d_eq2 = optics.planar ? estimate_eq2(optics, inertial) : detail::invalid_series(optics.q_norm.size());
  out.d_eq3 = estimate_eq3(optics, inertial);
  out.d_eq5 = estimate_eq5(optics, inertial);
  out.d_truth = true_distance(observer.position, object);
  return out;
}

// ---------------------------------------------------------------------------
// Orientation: direction of balance vs. surface of support

struct SlopeEstimate {
  Series slope_angle;           ///< [rad] in [0, pi], NaN when degenerate
  Series3 direction_of_balance; ///< unit, opposite to the specific force
  Flags valid;                  ///< false in free fall
};

inline constexpr double kFreeFallForce = 1e-6;  // [m/s^2]

inline SlopeEstimate slope_invariant(const InertialStream& inertial, const SupportStream& support) {
  if (!(inertial.grid == support.grid) || inertial.specific_force.size() != support.surface_normal.size()) {
    throw AlignmentError("slope_invariant: inertial and support grids differ");
  }
  const std::size_t n = support.surface_normal.size();
  SlopeEstimate out;
  out.slope_angle.assign(n, detail::nan());
  out.direction_of_balance.assign(n, Vec3::Constant(detail::nan()));
  out.valid.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3& normal = support.surface_normal[k];
    if (std::abs(normal.norm() - 1.0) > 1e-9) {
      throw InputShapeError("slope_invariant: surface normal at sample " + std::to_string(k) + " is not unit");
    }
    const Vec3& f = inertial.specific_force[k];
    const double mag = f.norm();
    if (!(mag >= kFreeFallForce)) continue;
    const Vec3 dob = -f / mag;
    out.direction_of_balance[k] = dob;
    out.slope_angle[k] = detail::angle_between(dob, normal);
    out.valid[k] = true;
  }
  return out;
}

}  // namespace garray
