#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "garray/generators.hpp"
#include "garray/io/csv.hpp"
#include "support/oracles.hpp"

using namespace garray;

namespace {

ScenarioConfig rectilinear() {
  ScenarioConfig c;
  c.kind = ScenarioKind::rectilinear;
  c.duration = 2.0;
  c.speed = 1.0;
  c.direction = Vec3::UnitX();
  return c;
}

ScenarioConfig planar_sway() {
  ScenarioConfig c;
  c.kind = ScenarioKind::planar_sway;
  c.duration = 10.0;
  c.start = Vec3(0.0, 0.0, 1.2);
  c.amplitude = Vec3(0.05, 0.03, 0.0);
  c.frequency = Vec3(0.4, 0.7, 0.0);
  c.phase = Vec3(0.3, 1.1, 0.0);
  c.object.position = Vec3(0.6, 0.0, 1.2);
  return c;
}

ScenarioConfig orbit() {
  ScenarioConfig c;
  c.kind = ScenarioKind::tangential_orbit;
  c.duration = 10.0;
  c.speed = 1.0;
  c.orbit_radius = 2.0;
  return c;
}

}  // namespace

TEST(Generate, RectilinearEndsAtSpeedTimesDuration) {
  const KinematicTrack t = generate(rectilinear());
  ASSERT_EQ(t.size(), 201u);
  EXPECT_NEAR(t.position.back().x(), 2.0, 1e-12);
  EXPECT_EQ(t.provenance, Provenance::analytic);
  for (const auto& v : t.velocity) EXPECT_EQ(v, Vec3(1.0, 0.0, 0.0));
  for (const auto& a : t.acceleration) EXPECT_EQ(a, Vec3::Zero());
}

TEST(Generate, OrbitStaysOnCircleAndMovesTangentially) {
  const KinematicTrack t = generate(orbit());
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_NEAR(t.position[k].norm(), 2.0, 1e-9);
    EXPECT_NEAR(t.velocity[k].dot(t.position[k].normalized()), 0.0, 1e-9);
    EXPECT_NEAR(t.velocity[k].norm(), 1.0, 1e-12);
  }
}

TEST(Generate, PlanarSwayIsTheClosedFormLissajous) {
  const ScenarioConfig c = planar_sway();
  const KinematicTrack t = generate(c);
  const auto f = oracle::sway(c.start, c.amplitude, c.frequency, c.phase);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_LT((t.position[k] - f(static_cast<double>(k) / 100.0)).norm(), 1e-12);
    EXPECT_EQ(t.position[k].z(), 1.2);
  }
}

TEST(Generate, AnalyticDerivativesAgreeWithBruteForce) {
  ScenarioConfig c = random_sway3d(11);
  const KinematicTrack t = generate(c);
  const auto f = oracle::sway(c.start, c.amplitude, c.frequency, c.phase);
  for (std::size_t k = 0; k < t.size(); k += 37) {
    const double tau = static_cast<double>(k) / c.sample_rate;
    EXPECT_LT((t.velocity[k] - oracle::derivative(f, tau)).norm(), 1e-8);
  }
}

TEST(Generate, NumericModeDifferentiatesCleanPositions) {
  ScenarioConfig c = planar_sway();
  c.derivatives = DerivativeMode::numeric;
  const KinematicTrack numeric = generate(c);
  c.derivatives = DerivativeMode::analytic;
  const KinematicTrack analytic = generate(c);
  EXPECT_EQ(numeric.provenance, Provenance::differentiated);
  for (std::size_t k = 0; k < numeric.size(); ++k) {
    EXPECT_EQ(numeric.position[k], analytic.position[k]);
    EXPECT_LT((numeric.velocity[k] - analytic.velocity[k]).norm(), 1e-4);
  }
}

TEST(Generate, SameSeedSameBytes) {
  ScenarioConfig c = random_sway3d(99);
  c.noise_sigma = 0.001;
  const std::string a = io::track_csv(generate(c));
  const std::string b = io::track_csv(generate(c));
  EXPECT_EQ(a, b);
  c.rng_seed = 100;
  EXPECT_NE(a, io::track_csv(generate(c)));
}

TEST(Generate, NoiseHasConfiguredSpread) {
  ScenarioConfig c = rectilinear();
  c.duration = 100.0;
  const KinematicTrack clean = generate(c);
  c.noise_sigma = 0.002;
  c.rng_seed = 5;
  const KinematicTrack noisy = generate(c);
  EXPECT_EQ(noisy.provenance, Provenance::differentiated);
  double sum = 0.0, sum2 = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    for (int ax = 0; ax < 3; ++ax) {
      const double e = noisy.position[k][ax] - clean.position[k][ax];
      sum += e;
      sum2 += e * e;
      ++n;
    }
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 1e-4);
  EXPECT_NEAR(sd, 0.002, 0.0001);
}

TEST(Generate, ScalingEveryLengthScalesPositions) {
  for (const ScenarioConfig& base : {rectilinear(), planar_sway(), orbit(), random_sway3d(3)}) {
    for (double k : {0.5, 2.0, 10.0, 0.37}) {
      const KinematicTrack a = generate(base);
      const KinematicTrack b = generate(base.scaled(k));
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_LT((b.position[i] - k * a.position[i]).norm(), 1e-12 * k * std::max(1.0, a.position[i].norm()));
      }
    }
  }
}

TEST(Generate, CustomSamplesAreDifferentiated) {
  ScenarioConfig c;
  c.kind = ScenarioKind::custom_samples;
  for (int k = 0; k < 50; ++k) c.samples.emplace_back(0.01 * k, 0.0, 0.0);
  const KinematicTrack t = generate(c);
  EXPECT_EQ(t.size(), 50u);
  EXPECT_EQ(t.provenance, Provenance::ingested);
  for (const auto& v : t.velocity) EXPECT_NEAR(v.x(), 1.0, 1e-9);
}

TEST(Generate, RejectsInvalidConfigs) {
  ScenarioConfig c = planar_sway();
  c.amplitude.x() = -0.1;
  EXPECT_THROW(generate(c), ConfigError);
  c = orbit();
  c.orbit_radius = 0.0;
  EXPECT_THROW(generate(c), ConfigError);
  c = rectilinear();
  c.speed = std::nan("");
  EXPECT_THROW(generate(c), ConfigError);
  c = rectilinear();
  c.duration = 0.0;
  EXPECT_THROW(generate(c), ConfigError);
  c = rectilinear();
  c.noise_sigma = -1.0;
  EXPECT_THROW(generate(c), ConfigError);
  c = rectilinear();
  c.object.position.x() = std::numeric_limits<double>::infinity();
  EXPECT_THROW(generate(c), ConfigError);
}

TEST(NormalStream, UniformsStayInsideTheOpenInterval) {
  NormalStream s(0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Playback, StationaryBodyHasNoMotion) {
  const KinematicTrack live = generate(planar_sway());
  const PlaybackPair pair = make_playback(live, Vec3(0.0, 0.0, 1.2));
  ASSERT_EQ(pair.stationary.size(), live.size());
  for (std::size_t k = 0; k < live.size(); ++k) {
    EXPECT_EQ(pair.stationary.velocity[k], Vec3::Zero());
    EXPECT_EQ(pair.stationary.acceleration[k], Vec3::Zero());
    EXPECT_EQ(pair.stationary.position[k], Vec3(0.0, 0.0, 1.2));
    EXPECT_EQ(pair.live.position[k], live.position[k]);
  }
  EXPECT_THROW(make_playback(live, Vec3(std::nan(""), 0, 0)), ConfigError);
}
