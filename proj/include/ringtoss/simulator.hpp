#pragma once

#include <vector>

#include "ringtoss/arm.hpp"
#include "ringtoss/config.hpp"
#include "ringtoss/goal_manifold.hpp"
#include "ringtoss/outcome.hpp"
#include "ringtoss/rng.hpp"
#include "ringtoss/trajectory.hpp"

namespace ringtoss {

/// Sources of mismatch between the planned and the executed throw.
struct GapModel {
  double drag_coeff = 0.0;          // 1/s
  double release_time_jitter_std = 0.0;  // s
  double release_speed_scale_std = 0.0;
  double release_angle_jitter_std = 0.0;  // rad
  std::uint64_t seed = 0;

  static GapModel none() { return {}; }
  void validate() const;
};

/// Reads drag_coeff, jitter_std, speed_scale_std, angle_std, seed from `section`.
GapModel load_gap_model(const IniConfig& cfg, const std::string& section);

struct ReleaseNoise {
  int shift_steps = 0;
  double speed_scale = 0.0;
  double angle = 0.0;
};

/// Draws the per-throw perturbation. Always consumes three normals so that the
/// stream layout does not depend on which stds are zero.
ReleaseNoise draw_release_noise(const GapModel& gap, double dt, Rng& rng);

/// Ring state when the gripper opens `shift_steps` control steps after the
/// final sample (negative: before). Shifts past the end follow the final EE
/// twist held constant, bounded by the settling horizon; earlier shifts are
/// clamped to the first sample.
ThrowState release_state_shifted(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom,
                                 int shift_steps);

ThrowState apply_release_noise(ThrowState state, const ReleaseNoise& noise);

ThrowState release_state(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom, const GapModel& gap,
                         Rng& rng);

struct NoLanding {};

struct Flight {
  Vec3 landing = Vec3::Zero();
  Vec3 landing_velocity = Vec3::Zero();
  double time = 0.0;
  std::vector<Vec3> path;  // integrator nodes, only when requested
};

inline constexpr double kFlightStep = 1e-3;
inline constexpr double kMaxFlightTime = 10.0;

/// RK4 point-mass flight with linear drag; landing is the descending crossing
/// of z = z_cyl, located on the cubic Hermite interpolant of the last step.
Outcome<Flight, NoLanding> simulate_flight(const ThrowState& release, const TaskGeometry& geom, double drag_coeff,
                                           double dt_int = kFlightStep, bool record_path = false);

struct LandingRecord {
  double x_exe = 0.0;
  double y_exe = 0.0;
  Target target;
  bool success = false;
  ThrowState release_state;

  double miss_distance() const { return std::hypot(x_exe - target.x, y_exe - target.y); }
};

bool landing_success(double x, double y, const Target& target, const TaskGeometry& geom);

Outcome<LandingRecord, NoLanding> execute(const Trajectory& traj, const Target& target, const ArmModel& arm,
                                          const TaskGeometry& geom, const GapModel& gap, Rng& rng);

/// Distance between the drag- and noise-free landings with the release moved
/// one control step earlier and one later. Infinite when either flight fails.
double release_sensitivity(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom);

bool stability_filter(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom, double threshold_m);

}  // namespace ringtoss
