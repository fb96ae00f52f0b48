#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "garray/io/csv.hpp"
#include "garray/pipeline.hpp"

using namespace garray;

namespace {

ScenarioConfig pass_by() {
  ScenarioConfig c;
  c.kind = ScenarioKind::rectilinear;
  c.duration = 2.0;
  c.speed = 1.0;
  c.direction = Vec3::UnitX();
  c.object.position = Vec3(3.0, 4.0, 0.0);
  return c;
}

ScenarioConfig planar_sway() {
  ScenarioConfig c;
  c.kind = ScenarioKind::planar_sway;
  c.duration = 10.0;
  c.start = Vec3(0.0, 0.0, 1.2);
  c.amplitude = Vec3(0.05, 0.03, 0.0);
  c.frequency = Vec3(0.4, 0.7, 0.0);
  c.object.position = Vec3(0.6, 0.0, 1.2);
  return c;
}

DistanceEstimateSeries constant_truth(double d, std::size_t n = 20) {
  DistanceEstimateSeries e;
  e.grid = TimeGrid{100.0, n, 0.0};
  e.d_truth.assign(n, d);
  for (auto* s : {&e.d_eq1, &e.d_eq2, &e.d_eq3, &e.d_eq5}) *s = EstimateSeries{Series(n, d), Flags(n, true)};
  return e;
}

}  // namespace

TEST(Accuracy, SwayContrastBetweenEstimators) {
  const AccuracyReport r = accuracy(run_scenario(random_sway3d(2015)).estimates, 0.05, "sway");
  EXPECT_EQ(r.scenario_id, "sway");
  EXPECT_EQ(r.tolerance, 0.05);
  EXPECT_EQ(r.get(Estimator::eq3).accurate_fraction, 1.0);
  ASSERT_TRUE(r.get(Estimator::eq1).accurate_fraction);
  EXPECT_LT(*r.get(Estimator::eq1).accurate_fraction, 0.2);
  EXPECT_FALSE(r.get(Estimator::eq2).accurate_fraction);
  EXPECT_TRUE(r.get(Estimator::eq2).empty());
}

TEST(Accuracy, RectilinearCollapse) {
  const AccuracyReport r = accuracy(run_scenario(pass_by()).estimates);
  for (Estimator e : {Estimator::eq1, Estimator::eq2, Estimator::eq3}) {
    EXPECT_EQ(r.get(e).accurate_fraction, 1.0) << to_string(e);
    EXPECT_EQ(r.get(e).valid_fraction, 1.0) << to_string(e);
  }
  // Off the tangent V/Q overshoots by 1/sin(alpha).
  EXPECT_LT(*r.get(Estimator::eq5).accurate_fraction, 1.0);
}

TEST(Accuracy, EmptyReportHasNoFractions) {
  DistanceEstimateSeries e = constant_truth(1.0);
  e.d_eq1.valid.assign(20, false);
  const AccuracyReport r = accuracy(e);
  EXPECT_TRUE(r.get(Estimator::eq1).empty());
  EXPECT_FALSE(r.get(Estimator::eq1).accurate_fraction.has_value());
  EXPECT_FALSE(r.get(Estimator::eq1).mean_abs_relative_error.has_value());
  EXPECT_EQ(r.get(Estimator::eq1).valid_fraction, 0.0);
  EXPECT_EQ(r.get(Estimator::eq3).accurate_fraction, 1.0);
}

TEST(Accuracy, CountsOnlyValidSamples) {
  DistanceEstimateSeries e = constant_truth(2.0, 10);
  for (std::size_t k = 0; k < 4; ++k) e.d_eq3.valid[k] = false;
  e.d_eq3.value[4] = 2.2;  // 10% off
  const EstimatorAccuracy a = accuracy(e, 0.05).get(Estimator::eq3);
  EXPECT_EQ(a.valid_samples, 6u);
  EXPECT_DOUBLE_EQ(a.valid_fraction, 0.6);
  EXPECT_DOUBLE_EQ(*a.accurate_fraction, 5.0 / 6.0);
  EXPECT_NEAR(*a.mean_abs_relative_error, 0.1 / 6.0, 1e-15);
}

TEST(Accuracy, MonotoneInTolerance) {
  const auto est = run_scenario(random_sway3d(31)).estimates;
  double prev_eq1 = 0.0, prev_eq5 = 0.0;
  for (double tol : {0.0, 0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 10.0}) {
    const AccuracyReport r = accuracy(est, tol);
    EXPECT_GE(*r.get(Estimator::eq1).accurate_fraction, prev_eq1);
    EXPECT_GE(*r.get(Estimator::eq5).accurate_fraction, prev_eq5);
    prev_eq1 = *r.get(Estimator::eq1).accurate_fraction;
    prev_eq5 = *r.get(Estimator::eq5).accurate_fraction;
    for (const auto& a : r.per_estimator) {
      if (a.accurate_fraction) {
        EXPECT_GE(*a.accurate_fraction, 0.0);
        EXPECT_LE(*a.accurate_fraction, 1.0);
      }
    }
  }
  EXPECT_THROW(accuracy(est, -0.1), ConfigError);
  EXPECT_THROW(accuracy(est, std::nan("")), ConfigError);
}

TEST(Reach, EverythingWithinAGenerousThreshold) {
  const ReachJudgment j = reach_judgment(constant_truth(2.0), 3.0);
  for (bool t : j.truth) EXPECT_TRUE(t);
}

TEST(Reach, TieCountsAsWithinReach) {
  const ReachJudgment j = reach_judgment(constant_truth(2.0), 2.0);
  for (bool t : j.truth) EXPECT_TRUE(t);
  for (const auto& v : j.get(Estimator::eq3)) EXPECT_EQ(v, std::optional<bool>(true));
  const ReachJudgment beyond = reach_judgment(constant_truth(2.0), std::nextafter(2.0, 0.0));
  for (bool t : beyond.truth) EXPECT_FALSE(t);
}

TEST(Reach, InvalidEstimatesGiveNoVerdict) {
  DistanceEstimateSeries e = constant_truth(1.0, 5);
  e.d_eq1.valid[2] = false;
  const ReachJudgment j = reach_judgment(e, 1.5);
  EXPECT_FALSE(j.get(Estimator::eq1)[2].has_value());
  EXPECT_EQ(j.agreement(Estimator::eq1), 1.0);
  e.d_eq5.valid.assign(5, false);
  EXPECT_FALSE(reach_judgment(e, 1.5).agreement(Estimator::eq5).has_value());
  EXPECT_THROW(reach_judgment(e, 0.0), ConfigError);
}

TEST(Reach, GeneralEstimatorMatchesTruthNearTheBoundary) {
  ScenarioConfig c = random_sway3d(5);
  c.object.position = Vec3(0.5, 0.0, 1.2);
  const auto est = run_scenario(c).estimates;
  const ReachJudgment j = reach_judgment(est, 0.6);
  EXPECT_EQ(j.agreement(Estimator::eq3), 1.0);
}

TEST(SampleTable, OneRowPerSample) {
  const ScenarioRun run = run_scenario(planar_sway());
  const Figure11Table rows = figure11_table(run.estimates, run.optics, run.inertial, run.observer.position);
  ASSERT_EQ(rows.size(), run.observer.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].t, run.observer.grid.time(k));
    if (rows[k].valid_eq3) {
      EXPECT_LT(std::abs(rows[k].d_eq3 - rows[k].d_truth) / rows[k].d_truth, 1e-6);
    }
  }
}

TEST(SampleTable, CsvRoundTripIsBitIdentical) {
  const ScenarioRun run = run_scenario(random_sway3d(12));
  const Figure11Table rows = figure11_table(run.estimates, run.optics, run.inertial, run.observer.position);
  std::istringstream in(io::figure11_csv(rows));
  const Figure11Table back = io::read_figure11_csv(in, "mem");
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(back[k].t, rows[k].t);
    EXPECT_EQ(back[k].position, rows[k].position);
    EXPECT_EQ(back[k].d_eq3, rows[k].d_eq3);
    EXPECT_EQ(back[k].d_eq1, rows[k].d_eq1);
    EXPECT_EQ(back[k].valid_eq2, rows[k].valid_eq2);
    EXPECT_TRUE(std::isnan(back[k].d_eq2));
  }
  const AccuracyReport a = accuracy(run.estimates);
  const AccuracyReport b = accuracy(estimates_from_table(back, run.estimates.grid));
  for (Estimator e : kAllEstimators) {
    EXPECT_EQ(a.get(e).valid_samples, b.get(e).valid_samples);
    EXPECT_EQ(a.get(e).accurate_fraction, b.get(e).accurate_fraction);
    EXPECT_EQ(a.get(e).mean_abs_relative_error, b.get(e).mean_abs_relative_error);
  }
}

TEST(SampleTable, RejectsMisalignedInputs) {
  const ScenarioRun run = run_scenario(pass_by());
  Series3 fewer(run.observer.position.begin(), run.observer.position.end() - 1);
  EXPECT_THROW(figure11_table(run.estimates, run.optics, run.inertial, fewer), AlignmentError);
}

TEST(Exploration, RectilinearWalk) {
  const ExplorationSummary s = exploration_summary(generate(pass_by()));
  EXPECT_NEAR(s.mean_speed, 1.0, 1e-12);
  EXPECT_NEAR(s.amplitude.x(), 2.0, 1e-12);
  EXPECT_EQ(s.amplitude.y(), 0.0);
  EXPECT_EQ(s.max_acceleration, 0.0);
}

TEST(Exploration, PlanarSwayPeakToPeak) {
  const ExplorationSummary s = exploration_summary(generate(planar_sway()));
  EXPECT_NEAR(s.amplitude.x(), 0.10, 1e-6);
  EXPECT_NEAR(s.amplitude.y(), 0.06, 1e-6);
  EXPECT_EQ(s.amplitude.z(), 0.0);
  const double w1 = 2 * std::numbers::pi * 0.4;
  EXPECT_LE(s.max_speed, std::hypot(0.05 * w1, 0.03 * 2 * std::numbers::pi * 0.7) + 1e-12);
  EXPECT_GT(s.max_speed, 0.05 * w1);
}

TEST(Exploration, StillTrackIsAllZero) {
  KinematicTrack t;
  t.grid = TimeGrid{100.0, 30, 0.0};
  t.position.assign(30, Vec3(1.0, 2.0, 3.0));
  t.velocity.assign(30, Vec3::Zero());
  t.acceleration.assign(30, Vec3::Zero());
  const ExplorationSummary s = exploration_summary(t);
  EXPECT_EQ(s.amplitude, Vec3::Zero());
  EXPECT_EQ(s.mean_speed, 0.0);
  EXPECT_EQ(s.max_speed, 0.0);
  EXPECT_EQ(s.mean_acceleration, 0.0);
  EXPECT_EQ(s.max_acceleration, 0.0);
}
