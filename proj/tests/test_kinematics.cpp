#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "garray/kinematics.hpp"

using namespace garray;

namespace {

TimeGrid grid(double rate, std::size_t n) { return TimeGrid{rate, n, 0.0}; }

Series3 sample(const TimeGrid& g, double (*fx)(double)) {
  Series3 s(g.n_samples);
  for (std::size_t k = 0; k < g.n_samples; ++k) s[k] = Vec3(fx(g.time(k)), 0.0, 0.0);
  return s;
}

double max_error_sin(double rate) {
  // sin(t) over [0, 2] s; derivative cos(t).
  const auto n = static_cast<std::size_t>(std::llround(2.0 * rate)) + 1;
  const TimeGrid g = grid(rate, n);
  const Series3 d = differentiate(sample(g, [](double t) { return std::sin(t); }), g);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(d[k].x() - std::cos(g.time(k))));
  return worst;
}

KinematicTrack linear_track(double rate, std::size_t n) {
  KinematicTrack t;
  t.grid = grid(rate, n);
  for (std::size_t k = 0; k < n; ++k) {
    t.position.emplace_back(t.grid.time(k), 0.5 * t.grid.time(k), 1.0);
    t.velocity.emplace_back(1.0, 0.5, 0.0);
    t.acceleration.emplace_back(0.0, 0.0, 0.0);
  }
  return t;
}

}  // namespace

TEST(TimeGrid, SampleTimeIsExact) {
  const TimeGrid g{100.0, 500, 1.5};
  for (std::size_t k = 0; k < g.n_samples; ++k) {
    EXPECT_EQ(g.time(k), 1.5 + static_cast<double>(k) / 100.0);
  }
  EXPECT_THROW((TimeGrid{0.0, 10, 0.0}.validate()), ConfigError);
  EXPECT_THROW((TimeGrid{100.0, 1, 0.0}.validate()), InsufficientDataError);
}

TEST(Differentiate, ConstantSeriesHasZeroDerivative) {
  for (double rate : {1.0, 100.0, 1234.5}) {
    const TimeGrid g = grid(rate, 17);
    const Series3 d = differentiate(Series3(17, Vec3(1, 2, 3)), g);
    for (const auto& v : d) EXPECT_EQ(v, Vec3::Zero());
  }
}

TEST(Differentiate, LinearIsExact) {
  const TimeGrid g = grid(100.0, 301);
  const Series3 d = differentiate(sample(g, [](double t) { return t; }), g);
  for (const auto& v : d) EXPECT_NEAR(v.x(), 1.0, 1e-9);
}

TEST(Differentiate, QuadraticIsExact) {
  const TimeGrid g = grid(100.0, 101);
  Series s(g.n_samples);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = g.time(k);
    s[k] = 3.0 * t * t - 2.0 * t + 0.5;
  }
  const Series d = differentiate(s, g);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(d[k], 6.0 * g.time(k) - 2.0, 1e-9);
}

TEST(Differentiate, SecondOrderConvergence) {
  const double e100 = max_error_sin(100.0);
  const double e200 = max_error_sin(200.0);
  EXPECT_LT(e100, 1e-4);
  EXPECT_GT(e100 / e200, 3.5);
  EXPECT_LT(e100 / e200, 4.5);
}

TEST(Differentiate, IsLinearInItsInput) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng() % 200;
    const TimeGrid g = grid(10.0, n);
    Series3 f(n), h(n), combo(n);
    const double a = u(rng), b = u(rng);
    for (std::size_t k = 0; k < n; ++k) {
      f[k] = Vec3(u(rng), u(rng), u(rng));
      h[k] = Vec3(u(rng), u(rng), u(rng));
      combo[k] = a * f[k] + b * h[k];
    }
    const Series3 df = differentiate(f, g), dh = differentiate(h, g), dc = differentiate(combo, g);
    for (std::size_t k = 0; k < n; ++k) {
      const Vec3 expected = a * df[k] + b * dh[k];
      EXPECT_LT((dc[k] - expected).norm(), 1e-12);
    }
  }
}

TEST(Differentiate, RejectsBadShapes) {
  EXPECT_THROW(differentiate(Series3(5), grid(100.0, 6)), InputShapeError);
  EXPECT_THROW(differentiate(Series3(2), grid(100.0, 2)), InsufficientDataError);
}

TEST(Differentiate, NanPropagatesOnlyThroughItsStencil) {
  Series s(10, 1.0);
  s[5] = std::nan("");
  const Series d = differentiate(s, grid(10.0, 10));
  EXPECT_TRUE(std::isnan(d[4]));
  EXPECT_TRUE(std::isnan(d[6]));
  EXPECT_EQ(d[5], 0.0);
  EXPECT_EQ(d[2], 0.0);
}

TEST(Resample, HalvingRateKeepsEndpoints) {
  const KinematicTrack t = linear_track(100.0, 201);
  const KinematicTrack r = resample(t, 50.0);
  ASSERT_EQ(r.size(), 101u);
  EXPECT_EQ(r.position.front(), t.position.front());
  EXPECT_EQ(r.position.back(), t.position.back());
  EXPECT_EQ(r.provenance, Provenance::differentiated);
  for (const auto& v : r.velocity) EXPECT_NEAR((v - Vec3(1.0, 0.5, 0.0)).norm(), 0.0, 1e-9);
}

TEST(Resample, SameRateIsIdentity) {
  const KinematicTrack t = linear_track(100.0, 157);
  const KinematicTrack r = resample(t, 100.0);
  ASSERT_EQ(r.size(), t.size());
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_LT((r.position[k] - t.position[k]).norm(), 1e-12);
}

TEST(Resample, SwayUpsampledMatchesClosedForm) {
  auto sway = [](double t) {
    return Vec3(0.05 * std::sin(2 * std::numbers::pi * 0.4 * t), 0.03 * std::sin(2 * std::numbers::pi * 0.7 * t), 0.0);
  };
  KinematicTrack t;
  t.grid = grid(100.0, 1001);
  for (std::size_t k = 0; k < t.size(); ++k) t.position.push_back(sway(t.grid.time(k)));
  derive_from_positions(t);
  const KinematicTrack r = resample(t, 200.0);
  ASSERT_EQ(r.size(), 2001u);
  for (std::size_t k = 0; k < r.size(); ++k) EXPECT_LT((r.position[k] - sway(r.grid.time(k))).norm(), 1e-4);
}

TEST(Resample, Errors) {
  EXPECT_THROW(resample(linear_track(100.0, 10), 0.0), ConfigError);
  KinematicTrack one;
  one.grid = grid(100.0, 1);
  one.position.assign(1, Vec3::Zero());
  one.velocity = one.acceleration = one.position;
  EXPECT_THROW(resample(one, 50.0), InsufficientDataError);
}
