#pragma once

/**
 * @file observables.hpp
 * @brief Single-energy observable streams: optical bearing kinematics,
 * inertial kinematics and the support-surface normal.
 *
 * Bearing convention: i points from the object toward the point of
 * observation. Q = |i x di/dt| does not depend on that sign; alpha is measured
 * between the direction to the object (-i) and the direction of motion.
 */

#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "garray/generators.hpp"
#include "garray/kinematics.hpp"

namespace garray {

/// How the bearing rate di/dt and alpha rate are obtained.
enum class RateMode {
  automatic,  ///< kinematic for analytic tracks, numeric otherwise
  kinematic,  ///< chain rule on the track's own velocity and acceleration
  numeric,    ///< finite differences of the sampled bearing and alpha series
};

struct ObservableConfig {
  double eps_v{1e-6};  ///< [m/s] alpha is undefined below this speed
  double eps_q{1e-6};  ///< [rad/s] distance estimators are undefined below this rate
  /// Max |n . i| for the bearing set to count as planar.
  double planarity_tol{1e-9};
  RateMode rates{RateMode::automatic};
};

inline constexpr double kMinSeparation = 1e-9;  // [m]

struct OpticalStream {
  TimeGrid grid;
  ObservableConfig config;
  Series3 bearing;  ///< i, unit
  Series3 omega;    ///< rotational vector i x di/dt [rad/s]
  Series alpha;      ///< [rad], NaN where invalid
  Series alpha_dot;  ///< [rad/s], NaN where invalid
  Series theta_dot;  ///< [rad/s] signed about plane_normal, NaN unless planar
  Series q_norm;     ///< Q [rad/s]
  Flags alpha_valid;
  Flags alpha_dot_valid;
  Flags theta_dot_valid;
  Flags q_valid;  ///< Q >= eps_q
  bool planar{false};
  Vec3 plane_normal{Vec3::UnitZ()};
};

struct InertialStream {
  TimeGrid grid;
  Series3 velocity;        ///< [m/s]
  Series speed_v;          ///< V [m/s]
  Series3 specific_force;  ///< gravity - acceleration [m/s^2]
  Vec3 gravity{0.0, 0.0, -9.81};
  /// Path-integrated displacement from the first sample [m].
  Series3 displacement;
};

struct SupportStream {
  TimeGrid grid;
  Series3 surface_normal;
};

inline Vec3 default_gravity() { return Vec3(0.0, 0.0, -9.81); }

namespace detail {

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Fits the plane through the object that best contains every bearing.
// Returns (planar, normal); the normal is oriented so that its first
// significant component among z, y, x is positive.
inline std::pair<bool, Vec3> bearing_plane(const Series3& bearing, double tol) {
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& b : bearing) scatter += b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(scatter);
  Vec3 n = solver.eigenvectors().col(0).normalized();
  for (int ax : {2, 1, 0}) {
    if (std::abs(n[ax]) > 1e-12) {
      if (n[ax] < 0.0) n = -n;
      break;
    }
  }
  double worst = 0.0;
  for (const auto& b : bearing) worst = std::max(worst, std::abs(n.dot(b)));
  return {worst <= tol, n};
}

}  // namespace detail

inline bool uses_kinematic_rates(const KinematicTrack& track, RateMode mode) {
  switch (mode) {
    case RateMode::kinematic: return true;
    case RateMode::numeric: return false;
    case RateMode::automatic: return track.provenance == Provenance::analytic;
  }
  return false;
}

/// Bearing kinematics of @p object as seen from the moving point of observation.
inline OpticalStream project_optics(const KinematicTrack& track, const ScenePoint& object,
                                    const ObservableConfig& config = {}) {
  track.validate();
  const std::size_t n = track.size();
  if (n < 3) throw InsufficientDataError("project_optics: need at least 3 samples");

  OpticalStream out;
  out.grid = track.grid;
  out.config = config;
  out.bearing.resize(n);
  Series dist(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 d = track.position[k] - object.position;
    dist[k] = d.norm();
    if (!(dist[k] > kMinSeparation)) {
      throw DegenerateGeometryError("project_optics: object coincides with the point of observation at sample " +
                                    std::to_string(k));
    }
    out.bearing[k] = d / dist[k];
  }

  const bool kinematic = uses_kinematic_rates(track, config.rates);
  Series3 bearing_rate(n);
  if (kinematic) {
    for (std::size_t k = 0; k < n; ++k) {
      const Vec3& i = out.bearing[k];
      const Vec3& v = track.velocity[k];
      bearing_rate[k] = (v - v.dot(i) * i) / dist[k];
    }
  } else {
    bearing_rate = differentiate(std::span<const Vec3>(out.bearing), track.grid);
  }

  out.omega.resize(n);
  out.q_norm.resize(n);
  out.q_valid.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.omega[k] = out.bearing[k].cross(bearing_rate[k]);
    out.q_norm[k] = out.omega[k].norm();
    out.q_valid[k] = out.q_norm[k] >= config.eps_q;
  }

  out.alpha.assign(n, detail::nan());
  out.alpha_valid.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const double speed = track.velocity[k].norm();
    if (speed > config.eps_v) {
      out.alpha[k] = detail::angle_between(-out.bearing[k], track.velocity[k]);
      out.alpha_valid[k] = true;
    }
  }

  out.alpha_dot.assign(n, detail::nan());
  out.alpha_dot_valid.assign(n, false);
  if (kinematic) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!out.alpha_valid[k]) continue;
      const double sin_a = std::sin(out.alpha[k]);
      if (!(sin_a > 1e-12)) continue;
      // Translation opens alpha at V sin(alpha) / D; turning the heading
      // toward the object's side closes it.
      const Vec3 to_object = -out.bearing[k];
      const double speed = track.velocity[k].norm();
      const Vec3 heading = track.velocity[k] / speed;
      const Vec3 side = (to_object - to_object.dot(heading) * heading).normalized();
      out.alpha_dot[k] = speed * sin_a / dist[k] - track.acceleration[k].dot(side) / speed;
      out.alpha_dot_valid[k] = true;
    }
  } else {
    const Series rate = differentiate(std::span<const double>(out.alpha), track.grid);
    for (std::size_t k = 0; k < n; ++k) {
      if (std::isfinite(rate[k])) {
        out.alpha_dot[k] = rate[k];
        out.alpha_dot_valid[k] = true;
      }
    }
  }

  auto [planar, normal] = detail::bearing_plane(out.bearing, config.planarity_tol);
  out.planar = planar;
  out.plane_normal = normal;
  out.theta_dot.assign(n, detail::nan());
  out.theta_dot_valid.assign(n, false);
  if (planar) {
    for (std::size_t k = 0; k < n; ++k) {
      out.theta_dot[k] = normal.dot(out.omega[k]);
      out.theta_dot_valid[k] = true;
    }
  }
  return out;
}

inline InertialStream project_inertial(const KinematicTrack& track, const Vec3& gravity = default_gravity()) {
  track.validate();
  if (!gravity.allFinite()) throw ConfigError("project_inertial: gravity must be finite");
  const std::size_t n = track.size();
  InertialStream out;
  out.grid = track.grid;
  out.gravity = gravity;
  out.velocity = track.velocity;
  out.speed_v.resize(n);
  out.specific_force.resize(n);
  out.displacement.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.speed_v[k] = track.velocity[k].norm();
    out.specific_force[k] = gravity - track.acceleration[k];
    out.displacement[k] = track.position[k] - track.position[0];
  }
  return out;
}

/// Optics from the recording, inertial kinematics from the body that stayed put.
inline std::pair<OpticalStream, InertialStream> replay_optics(const PlaybackPair& pair, const ScenePoint& object,
                                                              const ObservableConfig& config = {},
                                                              const Vec3& gravity = default_gravity()) {
  if (!(pair.live.grid == pair.stationary.grid)) {
    throw AlignmentError("replay_optics: live and stationary grids differ");
  }
  return {project_optics(pair.live, object, config), project_inertial(pair.stationary, gravity)};
}

/// Constant surface normal over the grid. The normal is normalized.
inline SupportStream constant_support(const TimeGrid& grid, const Vec3& normal) {
  if (!normal.allFinite() || normal.norm() == 0.0) {
    throw ConfigError("constant_support: normal must be finite and nonzero");
  }
  return SupportStream{grid, Series3(grid.n_samples, normal.normalized())};
}

/// Ground tilted by @p angle [rad] about @p axis, starting from level (+z up).
inline SupportStream tilted_support(const TimeGrid& grid, double angle, const Vec3& axis = Vec3::UnitY()) {
  const Vec3 normal = Eigen::AngleAxisd(angle, axis.normalized()) * Vec3::UnitZ();
  return SupportStream{grid, Series3(grid.n_samples, normal)};
}

}  // namespace garray
