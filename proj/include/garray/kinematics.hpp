#pragma once

/**
 * @file kinematics.hpp
 * @brief Uniformly sampled trajectories of the point of observation and the
 * finite-difference machinery used to differentiate them.
 *
 * All quantities are SI (m, s, rad). Series are plain std::vector values
 * aligned sample-for-sample with a TimeGrid.
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "garray/errors.hpp"

namespace garray {

using Vec3 = Eigen::Vector3d;
using Series3 = std::vector<Vec3>;
using Series = std::vector<double>;
using Flags = std::vector<bool>;

/// Sample k sits at t0 + k / sample_rate.
struct TimeGrid {
  double sample_rate{100.0};  ///< [Hz]
  std::size_t n_samples{2};
  double t0{0.0};  ///< [s]

  double time(std::size_t k) const { return t0 + static_cast<double>(k) / sample_rate; }
  double step() const { return 1.0 / sample_rate; }
  /// Time between the first and last sample.
  double span() const { return static_cast<double>(n_samples - 1) / sample_rate; }

  void validate() const {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
      throw ConfigError("TimeGrid: sample_rate must be finite and > 0");
    }
    if (!std::isfinite(t0)) {
      throw ConfigError("TimeGrid: t0 must be finite");
    }
    if (n_samples < 2) {
      throw InsufficientDataError("TimeGrid: n_samples must be >= 2");
    }
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

enum class Provenance { analytic, differentiated, ingested };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::differentiated: return "differentiated";
    case Provenance::ingested: return "ingested";
  }
  return "unknown";
}

struct KinematicTrack {
  TimeGrid grid;
  Series3 position;      ///< [m]
  Series3 velocity;      ///< [m/s]
  Series3 acceleration;  ///< [m/s^2]
  Provenance provenance{Provenance::analytic};

  std::size_t size() const { return grid.n_samples; }

  void validate() const {
    grid.validate();
    if (position.size() != grid.n_samples || velocity.size() != grid.n_samples ||
        acceleration.size() != grid.n_samples) {
      throw InputShapeError("KinematicTrack: series length differs from grid.n_samples");
    }
  }
};

/// A stationary object in the scene.
struct ScenePoint {
  Vec3 position{Vec3::Zero()};
  std::string label{"object"};
};

namespace detail {

inline void check_differentiable(std::size_t length, const TimeGrid& grid) {
  if (length != grid.n_samples) {
    throw InputShapeError("differentiate: series length " + std::to_string(length) +
                          " != grid.n_samples " + std::to_string(grid.n_samples));
  }
  if (grid.n_samples < 3) {
    throw InsufficientDataError("differentiate: need at least 3 samples");
  }
  if (!(grid.sample_rate > 0.0)) {
    throw ConfigError("differentiate: sample_rate must be > 0");
  }
}

// Second-order stencils: central in the interior, one-sided at both ends so
// the output keeps the input length.
template <typename T>
std::vector<T> differentiate_impl(std::span<const T> f, const TimeGrid& grid) {
  check_differentiable(f.size(), grid);
  const std::size_t n = f.size();
  const double inv_2h = 0.5 * grid.sample_rate;
  std::vector<T> out(n);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv_2h;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    out[k] = (f[k + 1] - f[k - 1]) * inv_2h;
  }
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv_2h;
  return out;
}

}  // namespace detail

/// Second-order finite-difference derivative of a vector series.
inline Series3 differentiate(std::span<const Vec3> series, const TimeGrid& grid) {
  return detail::differentiate_impl<Vec3>(series, grid);
}

/// Scalar overload. NaN samples propagate into every stencil that touches them.
inline Series differentiate(std::span<const double> series, const TimeGrid& grid) {
  return detail::differentiate_impl<double>(series, grid);
}

/**
 * Linearly interpolates positions onto a grid at @p new_rate that starts at
 * the same t0 and covers as much of the original span as whole steps allow.
 * Velocity and acceleration are re-derived numerically.
 */
inline KinematicTrack resample(const KinematicTrack& track, double new_rate) {
  if (!(new_rate > 0.0) || !std::isfinite(new_rate)) {
    throw ConfigError("resample: new_rate must be finite and > 0");
  }
  if (track.position.size() < 2 || track.grid.n_samples < 2) {
    throw InsufficientDataError("resample: need at least 2 samples");
  }
  track.validate();

  const TimeGrid& src = track.grid;
  // Small slack so that spans that are exact multiples of the new step keep
  // their final sample despite rounding in span * new_rate.
  const double steps = src.span() * new_rate;
  const auto n_new = static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;

  KinematicTrack out;
  out.grid = TimeGrid{new_rate, n_new, src.t0};
  out.provenance = Provenance::differentiated;
  out.position.resize(n_new);

  const std::size_t last = src.n_samples - 1;
  for (std::size_t k = 0; k < n_new; ++k) {
    // Position in units of source samples.
    const double u = static_cast<double>(k) * src.sample_rate / new_rate;
    auto i = static_cast<std::size_t>(std::floor(u));
    double frac = u - static_cast<double>(i);
    if (std::abs(frac) < 1e-9) {
      frac = 0.0;
    } else if (std::abs(frac - 1.0) < 1e-9) {
      ++i;
      frac = 0.0;
    }
    if (i >= last) {
      out.position[k] = track.position[last];
    } else if (frac == 0.0) {
      out.position[k] = track.position[i];
    } else {
      out.position[k] = (1.0 - frac) * track.position[i] + frac * track.position[i + 1];
    }
  }

  if (n_new >= 3) {
    out.velocity = differentiate(std::span<const Vec3>(out.position), out.grid);
    out.acceleration = differentiate(std::span<const Vec3>(out.velocity), out.grid);
  } else {
    const Vec3 v = (out.position[1] - out.position[0]) * new_rate;
    out.velocity.assign(n_new, v);
    out.acceleration.assign(n_new, Vec3::Zero());
  }
  return out;
}

/// Fills velocity/acceleration of a position-only track numerically.
inline void derive_from_positions(KinematicTrack& track) {
  track.velocity = differentiate(std::span<const Vec3>(track.position), track.grid);
  track.acceleration = differentiate(std::span<const Vec3>(track.velocity), track.grid);
}

}  // namespace garray
