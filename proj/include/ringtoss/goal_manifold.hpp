#pragma once

#include <string>

#include "ringtoss/arm.hpp"
#include "ringtoss/config.hpp"
#include "ringtoss/outcome.hpp"
#include "ringtoss/rng.hpp"
#include "ringtoss/types.hpp"

namespace ringtoss {

/// Ring pose and twist at release, world frame.
struct ThrowState {
  RigidTransform pose;
  Vec3 lin_vel = Vec3::Zero();
  Vec3 ang_vel = Vec3::Zero();
};

/// Top centre of the target peg; its height is TaskGeometry::z_cyl.
struct Target {
  double x = 0.0;
  double y = 0.0;
  double radius() const { return std::hypot(x, y); }
};

struct TaskGeometry {
  double r_ring = 0.075;
  double r_cyl = 0.005;
  double z_cyl = 0.1;
  double table_height = 0.75;
  double g = 9.81;
  /// Ring frame expressed in the end-effector frame (^E T_R).
  RigidTransform grasp = default_grasp();
  double h_settle = 0.05;

  double success_radius() const { return r_ring - r_cyl; }

  /// Ring centre 0.1 m along the EE z-axis, ring x-axis = EE x-axis, EE z pointing down.
  static RigidTransform default_grasp() {
    RigidTransform t;
    t.rotation = Vec3(1.0, -1.0, -1.0).asDiagonal();
    t.translation = Vec3(0.0, 0.0, 0.1);
    return t;
  }
  void validate() const;
};

/// Surrogate variables used to draw release states.
struct GoalSampling {
  double z_min = 0.9;
  double z_max = 1.4;
  double rho_min = 0.75;
  double rho_max = 1.05;
  double bearing_max = 15.0 * kPi / 180.0;
  double omega_min = 1.5 * kPi;
  double omega_max = 3.0 * kPi;
};

TaskGeometry load_geometry(const IniConfig& cfg);
GoalSampling load_goal_sampling(const IniConfig& cfg);
Environment load_environment(const IniConfig& cfg, const TaskGeometry& geom);

/// Horizontal release speed of a drag-free projectile released with zero
/// vertical velocity dz above the target plane that travels d_xy horizontally.
double required_speed(double d_xy, double dz, double g);

/// Deterministic manifold point from the surrogate variables.
ThrowState make_throw_state(const Target& target, const TaskGeometry& geom, const Vec3& ring_position,
                            double omega_z);

ThrowState sample_throw_state(const Target& target, const TaskGeometry& geom, const GoalSampling& sampling,
                              Rng& rng);

struct EeState {
  RigidTransform pose;
  Vec6 twist = Vec6::Zero();  // [v; omega] of the EE origin, world frame
};

/// Rigid transport of the ring state through the grasp transform.
EeState ring_to_ee(const ThrowState& throw_state, const TaskGeometry& geom);
ThrowState ee_to_ring(const EeState& ee, const TaskGeometry& geom);

enum class InfeasibleStage { Ik, Singular, VelocityLimit, Collision };
std::string to_string(InfeasibleStage stage);

struct Infeasible {
  InfeasibleStage stage = InfeasibleStage::Ik;
};

/// IK + differential IK + limit and collision checks for a throw candidate.
Outcome<JointState, Infeasible> feasible_goal(const ArmModel& arm, const Environment& env,
                                              const ThrowState& throw_state, const TaskGeometry& geom, Rng& rng,
                                              const IkOptions& ik = {});

/// Drag-free landing point of a ring released in `state` (closed form).
Vec3 ballistic_landing(const ThrowState& state, const TaskGeometry& geom);

}  // namespace ringtoss
