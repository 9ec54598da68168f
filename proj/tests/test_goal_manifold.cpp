#include <gtest/gtest.h>

#include "ringtoss/goal_manifold.hpp"
#include "support/fixtures.hpp"

using namespace ringtoss;
using ringtoss::testing::default_world;

namespace {

void expect_manifold_member(const ThrowState& s, const Target& target, const TaskGeometry& geom,
                            const GoalSampling& sampling) {
  const Mat3& R = s.pose.rotation;
  EXPECT_TRUE(s.pose.is_valid());
  EXPECT_NEAR(s.ang_vel.x(), 0.0, 1e-9);
  EXPECT_NEAR(s.ang_vel.y(), 0.0, 1e-9);
  EXPECT_GE(s.ang_vel.z(), sampling.omega_min - 1e-9);
  EXPECT_LE(s.ang_vel.z(), sampling.omega_max + 1e-9);
  EXPECT_NEAR(s.lin_vel.z(), 0.0, 1e-9);
  EXPECT_LE(s.lin_vel.cross(R.col(0)).norm(), 1e-9);
  EXPECT_GT(s.lin_vel.dot(R.col(0)), 0.0);
  EXPECT_LE((R.col(2) - Vec3::UnitZ()).norm(), 1e-9);
  const Vec3 to_target = Vec3(target.x, target.y, 0.0) - Vec3(s.pose.translation.x(), s.pose.translation.y(), 0.0);
  EXPECT_LE(R.col(0).cross(to_target.normalized()).norm(), 1e-9);
  const Vec3& p = s.pose.translation;
  EXPECT_NEAR(s.lin_vel.norm(), required_speed(to_target.norm(), p.z() - geom.z_cyl, geom.g), 1e-9);
  EXPECT_GE(p.z(), sampling.z_min - 1e-12);
  EXPECT_LE(p.z(), sampling.z_max + 1e-12);
}

}  // namespace

TEST(RequiredSpeed, MatchesClosedForm) {
  EXPECT_NEAR(required_speed(1.5, 0.4905, 9.81), 4.74342, 1e-5);
  EXPECT_EQ(required_speed(0.0, 0.3, 9.81), 0.0);
  EXPECT_THROW(required_speed(1.0, -0.1, 9.81), DomainError);
  EXPECT_THROW(required_speed(1.0, 0.0, 9.81), DomainError);
}

TEST(Geometry, DefaultsAreValid) {
  const TaskGeometry geom;
  EXPECT_NO_THROW(geom.validate());
  EXPECT_NEAR(geom.success_radius(), 0.07, 1e-15);
  EXPECT_TRUE(geom.grasp.is_valid());
  TaskGeometry bad;
  bad.r_cyl = 0.1;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(SampleThrowState, SamplesLieOnTheManifold) {
  const World& w = default_world();
  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    const Target target{uniform(rng, 1.0, 2.5), 0.0};
    const ThrowState s = sample_throw_state(target, w.geometry, w.sampling, rng);
    expect_manifold_member(s, target, w.geometry, w.sampling);
    const double rho = s.pose.translation.head<2>().norm();
    EXPECT_GE(rho, w.sampling.rho_min - 1e-12);
    EXPECT_LE(rho, w.sampling.rho_max + 1e-12);
  }
}

TEST(SampleThrowState, DragFreeFlightHitsTarget) {
  const World& w = default_world();
  Rng rng(43);
  for (int i = 0; i < 1000; ++i) {
    const Target target{uniform(rng, 1.0, 2.5), 0.0};
    const ThrowState s = sample_throw_state(target, w.geometry, w.sampling, rng);
    const Vec3 land = ballistic_landing(s, w.geometry);
    EXPECT_LE(std::hypot(land.x() - target.x, land.y() - target.y), 1e-6);
  }
}

TEST(SampleThrowState, DeterministicPerSeed) {
  const World& w = default_world();
  Rng a(47), b(47);
  const ThrowState sa = sample_throw_state({1.8, 0.0}, w.geometry, w.sampling, a);
  const ThrowState sb = sample_throw_state({1.8, 0.0}, w.geometry, w.sampling, b);
  EXPECT_EQ(sa.pose.translation, sb.pose.translation);
  EXPECT_EQ(sa.pose.rotation, sb.pose.rotation);
  EXPECT_EQ(sa.lin_vel, sb.lin_vel);
  EXPECT_EQ(sa.ang_vel, sb.ang_vel);
}

TEST(RingToEe, IdentityGraspIsTheIdentityMap) {
  TaskGeometry geom;
  geom.grasp = RigidTransform::identity();
  const ThrowState s = make_throw_state({2.0, 0.0}, geom, Vec3(0.8, 0.1, 1.1), 6.0);
  const EeState ee = ring_to_ee(s, geom);
  EXPECT_LE((ee.pose.translation - s.pose.translation).norm(), 1e-15);
  EXPECT_LE((ee.pose.rotation - s.pose.rotation).norm(), 1e-15);
  EXPECT_LE((ee.twist.head<3>() - s.lin_vel).norm(), 1e-15);
  EXPECT_LE((ee.twist.tail<3>() - s.ang_vel).norm(), 1e-15);
}

TEST(RingToEe, OffsetAlongSpinAxisKeepsLinearVelocity) {
  TaskGeometry geom;
  geom.grasp = RigidTransform::from_translation(Vec3(0.0, 0.0, 0.2));
  const ThrowState s = make_throw_state({2.0, 0.0}, geom, Vec3(0.8, 0.0, 1.1), 7.0);
  const EeState ee = ring_to_ee(s, geom);
  EXPECT_LE((ee.twist.head<3>() - s.lin_vel).norm(), 1e-12);
  EXPECT_LE((ee.pose.translation - (s.pose.translation - Vec3(0, 0, 0.2))).norm(), 1e-12);
}

TEST(RingToEe, RandomGraspRoundTrip) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    TaskGeometry geom;
    const Vec3 axis = Vec3(gaussian(rng), gaussian(rng), gaussian(rng)).normalized();
    geom.grasp.rotation = Eigen::AngleAxisd(uniform(rng, -kPi, kPi), axis).toRotationMatrix();
    geom.grasp.translation = Vec3(uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2));
    const ThrowState s = make_throw_state({1.7, 0.0}, geom, Vec3(0.9, -0.1, 1.2), 8.0);
    const ThrowState back = ee_to_ring(ring_to_ee(s, geom), geom);
    EXPECT_LE((back.pose.translation - s.pose.translation).norm(), 1e-9);
    EXPECT_LE((back.pose.rotation - s.pose.rotation).norm(), 1e-9);
    EXPECT_LE((back.lin_vel - s.lin_vel).norm(), 1e-9);
    EXPECT_LE((back.ang_vel - s.ang_vel).norm(), 1e-9);
  }
}

TEST(FeasibleGoal, ExcessiveSpeedIsAVelocityLimitFailure) {
  const World& w = default_world();
  const Target far{25.0, 0.0};
  const ThrowState s = make_throw_state(far, w.geometry, Vec3(0.9, 0.0, 1.1), 6.0);
  ASSERT_GT(s.lin_vel.norm(), 50.0);
  Rng rng(59);
  const auto goal = feasible_goal(w.arm, w.env, s, w.geometry, rng);
  ASSERT_FALSE(goal.has_value());
  EXPECT_EQ(goal.error().stage, InfeasibleStage::VelocityLimit);
}

TEST(FeasibleGoal, UnreachablePoseIsAnIkFailure) {
  const World& w = default_world();
  const ThrowState s = make_throw_state({2.0, 0.0}, w.geometry, Vec3(3.0, 0.0, 1.1), 6.0);
  Rng rng(61);
  const auto goal = feasible_goal(w.arm, w.env, s, w.geometry, rng);
  ASSERT_FALSE(goal.has_value());
  EXPECT_EQ(goal.error().stage, InfeasibleStage::Ik);
}

TEST(FeasibleGoal, KnownGoodFixture) {
  const World& w = default_world();
  const Target target{1.5, 0.0};
  const ThrowState s = make_throw_state(target, w.geometry, Vec3(0.9, 0.0, 1.1), 2.0 * kPi);
  Rng rng(67);
  const auto goal = feasible_goal(w.arm, w.env, s, w.geometry, rng);
  ASSERT_TRUE(goal.has_value()) << to_string(goal.error().stage);
  EXPECT_TRUE(check_state_limits(w.arm, *goal));
  EXPECT_FALSE(collides(w.arm, goal->q, w.env));
  const EeState ee = ring_to_ee(s, w.geometry);
  const RigidTransform fk = forward_kinematics(w.arm, goal->q);
  EXPECT_LE((fk.translation - ee.pose.translation).norm(), 1e-4);
  EXPECT_LE((jacobian(w.arm, goal->q) * goal->qdot - ee.twist).norm(), 1e-6);
}

TEST(FeasibleGoal, RejectionLoopTerminatesQuickly) {
  const World& w = default_world();
  Rng rng(71);
  long draws = 0;
  for (int goal_index = 0; goal_index < 100; ++goal_index) {
    const Target target{uniform(rng, 1.0, 2.5), 0.0};
    for (;;) {
      ++draws;
      ASSERT_LT(draws, 100L * 200L);
      const ThrowState s = sample_throw_state(target, w.geometry, w.sampling, rng);
      if (feasible_goal(w.arm, w.env, s, w.geometry, rng)) break;
    }
  }
  EXPECT_LE(static_cast<double>(draws) / 100.0, 200.0);
}
