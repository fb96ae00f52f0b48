#pragma once

/**
 * @file generators.hpp
 * @brief Synthetic head-motion trajectories and the playback transform.
 *
 * Every family is a closed-form function of elapsed time tau = t - t0, so
 * noise-free tracks carry exact velocity and acceleration. Position noise is
 * drawn from NormalStream (see below) and forces numerical re-derivation.
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "garray/kinematics.hpp"

namespace garray {

enum class ScenarioKind { rectilinear, planar_sway, sway3d, tangential_orbit, custom_samples };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::rectilinear: return "rectilinear";
    case ScenarioKind::planar_sway: return "planar_sway";
    case ScenarioKind::sway3d: return "sway3d";
    case ScenarioKind::tangential_orbit: return "tangential_orbit";
    case ScenarioKind::custom_samples: return "custom_samples";
  }
  return "unknown";
}

/// analytic: closed-form derivatives. numeric: finite differences of the
/// sampled positions even when noise is off.
enum class DerivativeMode { analytic, numeric };

/**
 * Gaussian stream with a fixed, portable algorithm: std::mt19937_64 (whose
 * output sequence is pinned by the C++ standard), 53-bit uniforms
 * u = ((x >> 11) + 0.5) / 2^53 in (0, 1), and the basic Box-Muller transform
 * emitting the cosine branch first and the sine branch second.
 * std::normal_distribution is not used because its algorithm is
 * implementation-defined.
 */
class NormalStream {
public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
  }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

private:
  std::mt19937_64 engine_;
  double spare_{0.0};
  bool has_spare_{false};
};

struct ScenarioConfig {
  ScenarioKind kind{ScenarioKind::rectilinear};
  double duration{2.0};       ///< [s]
  double sample_rate{100.0};  ///< [Hz]
  double t0{0.0};             ///< [s]
  ScenePoint object{};

  Vec3 start{Vec3::Zero()};     ///< [m] rest/start position
  double speed{1.0};            ///< [m/s] rectilinear and orbit speed
  Vec3 direction{Vec3::UnitX()};  ///< rectilinear heading, normalized on use
  Vec3 amplitude{Vec3::Zero()};   ///< [m] sway amplitude per axis
  Vec3 frequency{Vec3::Zero()};   ///< [Hz] sway frequency per axis
  Vec3 phase{Vec3::Zero()};       ///< [rad] sway phase per axis
  double orbit_radius{1.0};     ///< [m]
  double orbit_phase{0.0};      ///< [rad] starting angle around the object

  Series3 samples;  ///< custom_samples positions, one per grid sample

  double noise_sigma{0.0};  ///< [m] std of additive position noise
  std::uint64_t rng_seed{0};
  DerivativeMode derivatives{DerivativeMode::analytic};

  /// Sample count: the closed interval [t0, t0 + duration].
  std::size_t n_samples() const {
    if (kind == ScenarioKind::custom_samples) return samples.size();
    return static_cast<std::size_t>(std::llround(duration * sample_rate)) + 1;
  }

  TimeGrid grid() const { return TimeGrid{sample_rate, n_samples(), t0}; }

  /// Same scenario with every length multiplied by k (speeds included, so
  /// position(t) scales by k while time stays put).
  ScenarioConfig scaled(double k) const {
    ScenarioConfig c = *this;
    c.object.position *= k;
    c.start *= k;
    c.speed *= k;
    c.amplitude *= k;
    c.orbit_radius *= k;
    c.noise_sigma *= k;
    for (auto& s : c.samples) s *= k;
    return c;
  }

  void validate() const {
    auto finite3 = [](const Vec3& v) { return v.allFinite(); };
    auto fail = [](const std::string& what) { throw ConfigError("ScenarioConfig: " + what); };
    if (!std::isfinite(sample_rate) || !(sample_rate > 0.0)) fail("sample_rate must be finite and > 0");
    if (!std::isfinite(t0)) fail("t0 must be finite");
    if (!finite3(object.position)) fail("object position must be finite");
    if (!finite3(start)) fail("start must be finite");
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) fail("noise_sigma must be finite and >= 0");
    if (kind == ScenarioKind::custom_samples) {
      if (samples.size() < 3) fail("custom_samples needs at least 3 samples");
      for (const auto& s : samples) {
        if (!finite3(s)) fail("custom sample positions must be finite");
      }
      return;
    }
    if (!std::isfinite(duration) || !(duration > 0.0)) fail("duration must be finite and > 0");
    if (n_samples() < 3) fail("duration * sample_rate must give at least 3 samples");
    switch (kind) {
      case ScenarioKind::rectilinear:
        if (!std::isfinite(speed)) fail("speed must be finite");
        if (!finite3(direction) || direction.norm() == 0.0) fail("direction must be finite and nonzero");
        break;
      case ScenarioKind::planar_sway:
      case ScenarioKind::sway3d:
        if (!finite3(amplitude) || (amplitude.array() < 0.0).any()) fail("amplitudes must be finite and >= 0");
        if (!finite3(frequency) || (frequency.array() < 0.0).any()) fail("frequencies must be finite and >= 0");
        if (!finite3(phase)) fail("phases must be finite");
        break;
      case ScenarioKind::tangential_orbit:
        if (!std::isfinite(orbit_radius) || !(orbit_radius > 0.0)) fail("orbit radius must be finite and > 0");
        if (!std::isfinite(speed)) fail("speed must be finite");
        if (!std::isfinite(orbit_phase)) fail("orbit phase must be finite");
        break;
      case ScenarioKind::custom_samples:
        break;
    }
  }
};

namespace detail {

struct SwayAxes {
  Vec3 amplitude, frequency, phase;
};

inline void sway_state(const SwayAxes& s, double tau, Vec3& p, Vec3& v, Vec3& a) {
  for (int ax = 0; ax < 3; ++ax) {
    const double w = 2.0 * std::numbers::pi * s.frequency[ax];
    const double arg = w * tau + s.phase[ax];
    const double sn = std::sin(arg);
    const double cs = std::cos(arg);
    p[ax] = s.amplitude[ax] * sn;
    v[ax] = s.amplitude[ax] * w * cs;
    a[ax] = -s.amplitude[ax] * w * w * sn;
  }
}

}  // namespace detail

/// Synthesizes the configured trajectory.
inline KinematicTrack generate(const ScenarioConfig& config) {
  config.validate();
  KinematicTrack track;
  track.grid = config.grid();
  const std::size_t n = track.grid.n_samples;
  track.position.resize(n);
  track.velocity.resize(n);
  track.acceleration.resize(n);
  track.provenance = Provenance::analytic;

  switch (config.kind) {
    case ScenarioKind::rectilinear: {
      const Vec3 vel = config.speed * config.direction.normalized();
      for (std::size_t k = 0; k < n; ++k) {
        const double tau = static_cast<double>(k) / config.sample_rate;
        track.position[k] = config.start + vel * tau;
        track.velocity[k] = vel;
        track.acceleration[k] = Vec3::Zero();
      }
      break;
    }
    case ScenarioKind::planar_sway:
    case ScenarioKind::sway3d: {
      detail::SwayAxes axes{config.amplitude, config.frequency, config.phase};
      if (config.kind == ScenarioKind::planar_sway) {
        // Motion confined to the horizontal plane through start.
        axes.amplitude.z() = 0.0;
        axes.frequency.z() = 0.0;
        axes.phase.z() = 0.0;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double tau = static_cast<double>(k) / config.sample_rate;
        Vec3 p, v, a;
        detail::sway_state(axes, tau, p, v, a);
        track.position[k] = config.start + p;
        track.velocity[k] = v;
        track.acceleration[k] = a;
      }
      break;
    }
    case ScenarioKind::tangential_orbit: {
      const double r = config.orbit_radius;
      const double w = config.speed / r;
      const Vec3& c = config.object.position;
      for (std::size_t k = 0; k < n; ++k) {
        const double tau = static_cast<double>(k) / config.sample_rate;
        const double ang = config.orbit_phase + w * tau;
        const double cs = std::cos(ang);
        const double sn = std::sin(ang);
        track.position[k] = c + Vec3(r * cs, r * sn, 0.0);
        track.velocity[k] = Vec3(-r * w * sn, r * w * cs, 0.0);
        track.acceleration[k] = Vec3(-r * w * w * cs, -r * w * w * sn, 0.0);
      }
      break;
    }
    case ScenarioKind::custom_samples:
      track.position = config.samples;
      track.provenance = Provenance::ingested;
      break;
  }

  const bool noisy = config.noise_sigma > 0.0;
  if (noisy) {
    NormalStream noise(config.rng_seed);
    for (auto& p : track.position) {
      for (int ax = 0; ax < 3; ++ax) p[ax] += config.noise_sigma * noise();
    }
  }
  if (noisy || config.kind == ScenarioKind::custom_samples ||
      config.derivatives == DerivativeMode::numeric) {
    derive_from_positions(track);
    if (config.kind != ScenarioKind::custom_samples || noisy) {
      track.provenance = Provenance::differentiated;
    }
  }
  return track;
}

/**
 * Head-sway scenario drawn from @p seed: amplitudes in [0.02, 0.1] m,
 * frequencies in [0.1, 1.5] Hz, random phases, object straight ahead at
 * 0.4 to 1.2 m. Used by the demo suite.
 */
inline ScenarioConfig random_sway3d(std::uint64_t seed, double duration = 10.0,
                                    double sample_rate = 100.0) {
  NormalStream rng(seed);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  ScenarioConfig c;
  c.kind = ScenarioKind::sway3d;
  c.duration = duration;
  c.sample_rate = sample_rate;
  c.rng_seed = seed;
  for (int ax = 0; ax < 3; ++ax) {
    c.amplitude[ax] = between(0.02, 0.1);
    c.frequency[ax] = between(0.1, 1.5);
    c.phase[ax] = between(0.0, 2.0 * std::numbers::pi);
  }
  c.start = Vec3(0.0, 0.0, 1.2);
  c.object.position = Vec3(between(0.4, 1.2), 0.0, 1.2);
  c.object.label = "target";
  return c;
}

/// A recorded live motion replayed to an observer held at a fixed position.
struct PlaybackPair {
  KinematicTrack live;        ///< optics are rendered from this motion
  KinematicTrack stationary;  ///< the body actually stays here
};

inline PlaybackPair make_playback(const KinematicTrack& live, const Vec3& hold_position) {
  live.validate();
  if (!hold_position.allFinite()) {
    throw ConfigError("make_playback: hold position must be finite");
  }
  PlaybackPair pair;
  pair.live = live;
  pair.stationary.grid = live.grid;
  pair.stationary.provenance = live.provenance;
  pair.stationary.position.assign(live.size(), hold_position);
  pair.stationary.velocity.assign(live.size(), Vec3::Zero());
  pair.stationary.acceleration.assign(live.size(), Vec3::Zero());
  return pair;
}

}  // namespace garray
