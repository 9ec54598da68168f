#include <gtest/gtest.h>

#include "ringtoss/simulator.hpp"
#include "support/fixtures.hpp"

using namespace ringtoss;
using ringtoss::testing::default_world;
using ringtoss::testing::planned_throws;

// Landing shift of fixture 0 when released one control step late (frozen).
constexpr double kLateReleaseOffset = 0.005019990811661738;

namespace {

ThrowState horizontal_release(const Vec3& p, const Vec3& v) {
  ThrowState s;
  s.pose.translation = p;
  s.lin_vel = v;
  return s;
}

}  // namespace

TEST(GapModel, ValidatesStandardDeviations) {
  GapModel g;
  EXPECT_NO_THROW(g.validate());
  g.release_angle_jitter_std = -1e-3;
  EXPECT_THROW(g.validate(), ConfigError);
  g = {};
  g.drag_coeff = -0.1;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(SimulateFlight, ClosedFormParabola) {
  const TaskGeometry geom;
  const auto f = simulate_flight(horizontal_release(Vec3(0.0, 0.0, geom.z_cyl + 0.4905), Vec3(3.16228, 0, 0)),
                                 geom, 0.0);
  ASSERT_TRUE(f.has_value());
  EXPECT_NEAR(f->landing.x(), 1.0, 1e-5);
  EXPECT_NEAR(f->landing.y(), 0.0, 1e-12);
  EXPECT_NEAR(f->time, 0.31623, 1e-5);
  EXPECT_NEAR(f->landing.x(), 3.16228 * std::sqrt(0.1), 1e-6);
}

TEST(SimulateFlight, DropLandsBelowReleasePoint) {
  const TaskGeometry geom;
  const auto f = simulate_flight(horizontal_release(Vec3(0.3, -0.2, 1.0), Vec3::Zero()), geom, 0.0);
  ASSERT_TRUE(f.has_value());
  EXPECT_NEAR(f->landing.x(), 0.3, 1e-12);
  EXPECT_NEAR(f->landing.y(), -0.2, 1e-12);
}

TEST(SimulateFlight, MatchesClosedFormOnSampledReleases) {
  const World& w = default_world();
  Rng rng(301);
  for (int i = 0; i < 100; ++i) {
    const ThrowState s = sample_throw_state({uniform(rng, 1.0, 2.5), 0.0}, w.geometry, w.sampling, rng);
    const auto f = simulate_flight(s, w.geometry, 0.0);
    ASSERT_TRUE(f.has_value());
    EXPECT_LE((f->landing - ballistic_landing(s, w.geometry)).head<2>().norm(), 1e-6);
  }
}

TEST(SimulateFlight, DragShortensTheThrow) {
  const TaskGeometry geom;
  const ThrowState s = horizontal_release(Vec3(0.0, 0.0, 1.1), Vec3(5.0, 0.0, 0.0));
  const double free = simulate_flight(s, geom, 0.0)->landing.x();
  double previous = free;
  for (double c : {0.1, 0.3, 1.0, 2.0}) {
    const double x = simulate_flight(s, geom, c)->landing.x();
    EXPECT_LT(x, previous);
    previous = x;
  }
}

TEST(SimulateFlight, EnergyIsConservedWithoutDrag) {
  const TaskGeometry geom;
  const ThrowState s = horizontal_release(Vec3(0.2, 0.1, 1.3), Vec3(4.0, 1.0, 0.0));
  const auto f = simulate_flight(s, geom, 0.0);
  ASSERT_TRUE(f.has_value());
  const double expected = s.lin_vel.squaredNorm() + 2.0 * geom.g * (1.3 - geom.z_cyl);
  EXPECT_NEAR(f->landing_velocity.squaredNorm() / expected, 1.0, 1e-6);
}

TEST(SimulateFlight, HalvingTheStepBarelyMovesTheLanding) {
  const TaskGeometry geom;
  const ThrowState s = horizontal_release(Vec3(0.0, 0.0, 1.2), Vec3(5.5, 0.3, 0.0));
  const auto a = simulate_flight(s, geom, 0.3, 1e-3);
  const auto b = simulate_flight(s, geom, 0.3, 5e-4);
  ASSERT_TRUE(a && b);
  EXPECT_LE((a->landing - b->landing).norm(), 1e-8);
}

TEST(SimulateFlight, ReleaseBelowTargetPlaneIsRejected) {
  const TaskGeometry geom;
  EXPECT_THROW(simulate_flight(horizontal_release(Vec3(0, 0, 0.05), Vec3(1, 0, 0)), geom, 0.0), DomainError);
}

TEST(SimulateFlight, RisingForeverNeverLands) {
  TaskGeometry geom;
  geom.g = 0.0;
  const ThrowState s = horizontal_release(Vec3(0, 0, 1.0), Vec3(1, 0, 0));
  EXPECT_FALSE(simulate_flight(s, geom, 0.0).has_value());
}

TEST(Success, UsesRingMinusPegRadius) {
  const TaskGeometry geom;
  const Target t{2.0, 0.0};
  EXPECT_TRUE(landing_success(2.0, 0.0, t, geom));
  EXPECT_TRUE(landing_success(2.0 + 0.0699, 0.0, t, geom));
  EXPECT_FALSE(landing_success(2.08, 0.0, t, geom));
  EXPECT_FALSE(landing_success(2.0, -0.0701, t, geom));
}

TEST(ReleaseState, ZeroGapReproducesThePlannedThrow) {
  const World& w = default_world();
  for (const auto& fx : planned_throws(8)) {
    Rng rng(1);
    const ThrowState s = release_state(fx.trajectory, w.arm, w.geometry, GapModel::none(), rng);
    EXPECT_LE((s.pose.translation - fx.throw_state.pose.translation).norm(), 1e-6);
    EXPECT_LE((s.pose.rotation - fx.throw_state.pose.rotation).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE((s.lin_vel - fx.throw_state.lin_vel).norm(), 1e-6);
    EXPECT_LE((s.ang_vel - fx.throw_state.ang_vel).norm(), 1e-6);
  }
}

TEST(ReleaseState, OneStepLateReleaseGivesAFrozenOffset) {
  const World& w = default_world();
  const auto& fx = planned_throws(1)[0];
  const ThrowState nominal = release_state_shifted(fx.trajectory, w.arm, w.geometry, 0);
  const ThrowState late = release_state_shifted(fx.trajectory, w.arm, w.geometry, 1);
  const Vec3 a = simulate_flight(nominal, w.geometry, 0.0)->landing;
  const Vec3 b = simulate_flight(late, w.geometry, 0.0)->landing;
  const double offset = (b - a).head<2>().norm();
  EXPECT_GT(offset, 0.0);
  EXPECT_NEAR(offset, kLateReleaseOffset, 1e-9);
  const Vec3 again = simulate_flight(release_state_shifted(fx.trajectory, w.arm, w.geometry, 1), w.geometry, 0.0)->landing;
  EXPECT_EQ(again, b);
}

TEST(ReleaseState, SpeedScaleStretchesRangeProportionally) {
  const World& w = default_world();
  for (const auto& fx : planned_throws(4)) {
    const ThrowState nominal = release_state_shifted(fx.trajectory, w.arm, w.geometry, 0);
    const ThrowState fast = apply_release_noise(nominal, {0, 0.1, 0.0});
    const Vec3 p = nominal.pose.translation;
    const Vec3 a = simulate_flight(nominal, w.geometry, 0.0)->landing - p;
    const Vec3 b = simulate_flight(fast, w.geometry, 0.0)->landing - p;
    EXPECT_NEAR(b.head<2>().norm() / a.head<2>().norm(), 1.1, 1e-6);
  }
}

TEST(ReleaseState, AngleJitterRotatesHorizontally) {
  ThrowState s = horizontal_release(Vec3(0, 0, 1), Vec3(3.0, 0.0, 0.0));
  const ThrowState r = apply_release_noise(s, {0, 0.0, 0.1});
  EXPECT_NEAR(r.lin_vel.norm(), 3.0, 1e-12);
  EXPECT_NEAR(std::atan2(r.lin_vel.y(), r.lin_vel.x()), 0.1, 1e-12);
  EXPECT_EQ(r.lin_vel.z(), 0.0);
}

TEST(ReleaseState, NoiseDrawIsDeterministic) {
  GapModel gap;
  gap.release_time_jitter_std = 0.002;
  gap.release_speed_scale_std = 0.01;
  gap.release_angle_jitter_std = 0.005;
  Rng a(5), b(5);
  const ReleaseNoise na = draw_release_noise(gap, 1.0 / 240.0, a);
  const ReleaseNoise nb = draw_release_noise(gap, 1.0 / 240.0, b);
  EXPECT_EQ(na.shift_steps, nb.shift_steps);
  EXPECT_EQ(na.speed_scale, nb.speed_scale);
  EXPECT_EQ(na.angle, nb.angle);
}

TEST(Execute, ZeroGapHitsPlannedTargets) {
  const World& w = default_world();
  for (const auto& fx : planned_throws(8)) {
    Rng rng(7);
    const auto rec = execute(fx.trajectory, fx.target, w.arm, w.geometry, GapModel::none(), rng);
    ASSERT_TRUE(rec.has_value());
    EXPECT_TRUE(rec->success);
    EXPECT_LE(rec->miss_distance(), 0.01);
  }
}

TEST(Execute, IdenticalSeedsGiveIdenticalRecords) {
  const World& w = default_world();
  const auto& fx = planned_throws(1)[0];
  GapModel gap;
  gap.drag_coeff = 0.3;
  gap.release_time_jitter_std = 0.002;
  gap.release_speed_scale_std = 0.01;
  gap.release_angle_jitter_std = 0.005;
  Rng a(11), b(11);
  const auto ra = execute(fx.trajectory, fx.target, w.arm, w.geometry, gap, a);
  const auto rb = execute(fx.trajectory, fx.target, w.arm, w.geometry, gap, b);
  ASSERT_TRUE(ra && rb);
  EXPECT_EQ(ra->x_exe, rb->x_exe);
  EXPECT_EQ(ra->y_exe, rb->y_exe);
}

TEST(Execute, DefaultGapFallsShort) {
  const World& w = default_world();
  GapModel gap;
  gap.drag_coeff = 0.3;
  for (const auto& fx : planned_throws(8)) {
    Rng rng(13);
    const auto rec = execute(fx.trajectory, fx.target, w.arm, w.geometry, gap, rng);
    ASSERT_TRUE(rec.has_value());
    EXPECT_LT(rec->x_exe, fx.target.x);
  }
}

TEST(StabilityFilter, ThresholdExtremes) {
  const World& w = default_world();
  for (const auto& fx : planned_throws(4)) {
    const double s = release_sensitivity(fx.trajectory, w.arm, w.geometry);
    EXPECT_GT(s, 0.0);
    EXPECT_FALSE(stability_filter(fx.trajectory, w.arm, w.geometry, 0.0));
    EXPECT_TRUE(stability_filter(fx.trajectory, w.arm, w.geometry, INFINITY));
    EXPECT_TRUE(stability_filter(fx.trajectory, w.arm, w.geometry, w.stability_threshold));
  }
}

TEST(StabilityFilter, ConstantEndVelocityPassesWithMargin) {
  // A wrist-free arm moving at constant joint rates near release: the EE
  // twist barely changes over one control step.
  const World& w = default_world();
  const auto& fx = planned_throws(1)[0];
  Trajectory traj;
  const Vec6 qdot = fx.goal.qdot;
  for (int k = -120; k <= 0; ++k) {
    JointState s;
    s.q = fx.goal.q + qdot * (k / 240.0);
    s.qdot = qdot;
    traj.samples.push_back(s);
  }
  EXPECT_LT(release_sensitivity(traj, w.arm, w.geometry), 0.5 * w.stability_threshold);
}
