#pragma once

// Glue: scenario -> track -> observable streams -> distance estimates.

#include <utility>

#include "garray/analysis.hpp"
#include "garray/detector.hpp"
#include "garray/generators.hpp"
#include "garray/invariants.hpp"
#include "garray/observables.hpp"

namespace garray {

struct ScenarioRun {
  KinematicTrack observer;  ///< body whose motion the inertial stream reports
  OpticalStream optics;
  InertialStream inertial;
  DistanceEstimateSeries estimates;
};

/// Optics and inertial kinematics both generated by @p track.
inline ScenarioRun run_track(const KinematicTrack& track, const ScenePoint& object,
                             const ObservableConfig& obs = {}, const Vec3& gravity = default_gravity()) {
  ScenarioRun run;
  run.observer = track;
  run.optics = project_optics(track, object, obs);
  run.inertial = project_inertial(track, gravity);
  run.estimates = estimate_distances(run.optics, run.inertial, track, object);
  return run;
}

inline ScenarioRun run_scenario(const ScenarioConfig& config, const ObservableConfig& obs = {},
                                const Vec3& gravity = default_gravity()) {
  return run_track(generate(config), config.object, obs, gravity);
}

/// Optics rendered from @p optics_source, inertial kinematics from @p body.
inline ScenarioRun run_mismatched(const KinematicTrack& optics_source, const KinematicTrack& body,
                                  const ScenePoint& object, const ObservableConfig& obs = {},
                                  const Vec3& gravity = default_gravity()) {
  if (!(optics_source.grid == body.grid)) throw AlignmentError("run_mismatched: track grids differ");
  ScenarioRun run;
  run.observer = body;
  run.optics = project_optics(optics_source, object, obs);
  run.inertial = project_inertial(body, gravity);
  run.estimates = estimate_distances(run.optics, run.inertial, body, object);
  return run;
}

inline ScenarioRun run_playback(const PlaybackPair& pair, const ScenePoint& object, const ObservableConfig& obs = {},
                                const Vec3& gravity = default_gravity()) {
  auto [optics, inertial] = replay_optics(pair, object, obs, gravity);
  ScenarioRun run;
  run.observer = pair.stationary;
  run.optics = std::move(optics);
  run.inertial = std::move(inertial);
  run.estimates = estimate_distances(run.optics, run.inertial, pair.stationary, object);
  return run;
}

}  // namespace garray
