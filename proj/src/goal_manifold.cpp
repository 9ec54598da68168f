#include "ringtoss/goal_manifold.hpp"

namespace ringtoss {

void TaskGeometry::validate() const {
  if (!(r_ring > r_cyl)) throw ConfigError("geometry: r_ring must exceed r_cyl");
  if (!(z_cyl > 0.0)) throw ConfigError("geometry: z_cyl must be positive");
  if (!(g > 0.0)) throw ConfigError("geometry: g must be positive");
  if (!(h_settle >= 0.0)) throw ConfigError("geometry: h_settle must be non-negative");
  if (!grasp.is_valid()) throw ConfigError("geometry: grasp rotation is not a proper rotation");
}

TaskGeometry load_geometry(const IniConfig& cfg) {
  TaskGeometry geom;
  geom.r_ring = cfg.get_double("geometry.r_ring", geom.r_ring);
  geom.r_cyl = cfg.get_double("geometry.r_cyl", geom.r_cyl);
  geom.z_cyl = cfg.get_double("geometry.z_cyl", geom.z_cyl);
  geom.table_height = cfg.get_double("geometry.table_height", geom.table_height);
  geom.g = cfg.get_double("geometry.g", geom.g);
  geom.h_settle = cfg.get_double("geometry.h_settle", geom.h_settle);
  geom.grasp.translation.z() = cfg.get_double("geometry.grasp_offset", geom.grasp.translation.z());
  geom.validate();
  return geom;
}

GoalSampling load_goal_sampling(const IniConfig& cfg) {
  GoalSampling s;
  s.z_min = cfg.get_double("goal.z_min", s.z_min);
  s.z_max = cfg.get_double("goal.z_max", s.z_max);
  s.rho_min = cfg.get_double("goal.rho_min", s.rho_min);
  s.rho_max = cfg.get_double("goal.rho_max", s.rho_max);
  s.bearing_max = cfg.get_double("goal.bearing_max_deg", s.bearing_max * 180.0 / kPi) * kPi / 180.0;
  s.omega_min = cfg.get_double("goal.omega_min", s.omega_min);
  s.omega_max = cfg.get_double("goal.omega_max", s.omega_max);
  if (!(s.z_min <= s.z_max && s.rho_min <= s.rho_max && s.omega_min <= s.omega_max && s.bearing_max >= 0.0)) {
    throw ConfigError("goal: sampling ranges must be ordered");
  }
  return s;
}

Environment load_environment(const IniConfig& cfg, const TaskGeometry& geom) {
  Environment env;
  env.ground_z = cfg.get_double("environment.ground_z", 0.0);
  const auto lo = cfg.get_doubles("environment.table_min", {-0.45, -0.35, 0.0});
  const auto hi = cfg.get_doubles("environment.table_max", {0.15, 0.35, geom.table_height});
  if (lo.size() != 3 || hi.size() != 3) throw ConfigError("environment: table bounds need 3 values");
  env.table = Box{{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}};
  env.self_collision = cfg.get_bool("environment.self_collision", true);
  env.first_table_link = static_cast<int>(cfg.get_int("environment.first_table_link", 2));
  return env;
}

double required_speed(double d_xy, double dz, double g) {
  if (!(dz > 0.0)) throw DomainError("required_speed: release must be above the target plane (dz > 0)");
  if (!(d_xy >= 0.0)) throw DomainError("required_speed: horizontal distance must be non-negative");
  return d_xy * std::sqrt(g / (2.0 * dz));
}

ThrowState make_throw_state(const Target& target, const TaskGeometry& geom, const Vec3& ring_position,
                            double omega_z) {
  const Vec3 to_target(target.x - ring_position.x(), target.y - ring_position.y(), 0.0);
  const double d_xy = to_target.norm();
  const Vec3 x_axis = d_xy > 0.0 ? Vec3(to_target / d_xy) : Vec3::UnitX();
  const Vec3 z_axis = Vec3::UnitZ();
  const Vec3 y_axis = z_axis.cross(x_axis);

  ThrowState s;
  s.pose.rotation.col(0) = x_axis;
  s.pose.rotation.col(1) = y_axis;
  s.pose.rotation.col(2) = z_axis;
  s.pose.translation = ring_position;
  s.lin_vel = required_speed(d_xy, ring_position.z() - geom.z_cyl, geom.g) * x_axis;
  s.ang_vel = Vec3(0.0, 0.0, omega_z);
  return s;
}

ThrowState sample_throw_state(const Target& target, const TaskGeometry& geom, const GoalSampling& sampling,
                              Rng& rng) {
  const double z = uniform(rng, sampling.z_min, sampling.z_max);
  const double rho = uniform(rng, sampling.rho_min, sampling.rho_max);
  const double bearing = std::atan2(target.y, target.x) + uniform(rng, -sampling.bearing_max, sampling.bearing_max);
  const double omega = uniform(rng, sampling.omega_min, sampling.omega_max);
  return make_throw_state(target, geom, Vec3(rho * std::cos(bearing), rho * std::sin(bearing), z), omega);
}

EeState ring_to_ee(const ThrowState& s, const TaskGeometry& geom) {
  EeState ee;
  ee.pose = s.pose * geom.grasp.inverse();
  const Vec3 lever = ee.pose.translation - s.pose.translation;
  ee.twist.head<3>() = s.lin_vel + s.ang_vel.cross(lever);
  ee.twist.tail<3>() = s.ang_vel;
  return ee;
}

ThrowState ee_to_ring(const EeState& ee, const TaskGeometry& geom) {
  ThrowState s;
  s.pose = ee.pose * geom.grasp;
  const Vec3 omega = ee.twist.tail<3>();
  s.lin_vel = ee.twist.head<3>() + omega.cross(s.pose.translation - ee.pose.translation);
  s.ang_vel = omega;
  return s;
}

std::string to_string(InfeasibleStage stage) {
  switch (stage) {
    case InfeasibleStage::Ik: return "ik";
    case InfeasibleStage::Singular: return "singular";
    case InfeasibleStage::VelocityLimit: return "velocity-limit";
    case InfeasibleStage::Collision: return "collision";
  }
  return "unknown";
}

Outcome<JointState, Infeasible> feasible_goal(const ArmModel& arm, const Environment& env,
                                              const ThrowState& throw_state, const TaskGeometry& geom, Rng& rng,
                                              const IkOptions& ik) {
  const EeState ee = ring_to_ee(throw_state, geom);
  const auto q = inverse_kinematics(arm, ee.pose, rng, ik);
  if (!q) return Infeasible{InfeasibleStage::Ik};
  const auto qdot = joint_velocities_from_twist(arm, *q, ee.twist);
  if (!qdot) return Infeasible{InfeasibleStage::Singular};
  const JointState state{*q, *qdot};
  if (!check_state_limits(arm, state)) return Infeasible{InfeasibleStage::VelocityLimit};
  if (collides(arm, state.q, env)) return Infeasible{InfeasibleStage::Collision};
  return state;
}

Vec3 ballistic_landing(const ThrowState& state, const TaskGeometry& geom) {
  const Vec3& p = state.pose.translation;
  const Vec3& v = state.lin_vel;
  // z(t) = p_z + v_z t - g t^2 / 2 = z_cyl, descending root.
  const double dz = p.z() - geom.z_cyl;
  const double t = (v.z() + std::sqrt(v.z() * v.z() + 2.0 * geom.g * dz)) / geom.g;
  return {p.x() + v.x() * t, p.y() + v.y() * t, geom.z_cyl};
}

}  // namespace ringtoss
