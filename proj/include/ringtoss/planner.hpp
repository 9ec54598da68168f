#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringtoss/arm.hpp"
#include "ringtoss/config.hpp"
#include "ringtoss/dimt.hpp"
#include "ringtoss/outcome.hpp"
#include "ringtoss/rng.hpp"
#include "ringtoss/trajectory.hpp"

namespace ringtoss {

struct PlannerConfig {
  int n_planning = 80;
  int n_smoothing = 100;
  double dt_col = 1.0 / 30.0;
  double f_ctrl = kControlRate;
  double goal_bias = 0.2;
  /// Quick rejection: the straight start-to-goal DIMT connection must not exceed this.
  double duration_cap = 5.0;
  /// Attempt the straight start-to-goal connection before drawing samples.
  bool try_direct = true;
};

PlannerConfig load_planner_config(const IniConfig& cfg);

/// Chain of synchronised DIMT segments; the analytic form of a planned motion.
struct Path {
  std::vector<MotionSegment> segments;

  double duration() const;
  JointState state_at(double t) const;
  JointState start() const;
  JointState end() const;
  /// Sub-path on [t_begin, t_end], re-based to time 0.
  Path slice(double t_begin, double t_end) const;
};

enum class RejectReason { StartInvalid, GoalInvalid, DurationCap };
std::string to_string(RejectReason reason);

/// Cheap necessary conditions checked before any tree growth.
std::optional<RejectReason> quick_reject(const ArmModel& arm, const Environment& env, const JointState& start,
                                         const JointState& goal, const PlannerConfig& cfg);

/// Limits (exact over the analytic profiles) plus discrete collision checks at dt_col.
bool segment_valid(const MotionSegment& seg, const ArmModel& arm, const Environment& env, double dt_col);

struct PlanFail {
  enum class Kind { QuickReject, Budget } kind = Kind::Budget;
  std::optional<RejectReason> reason;
  int samples = 0;
};

/// DIMT-RRT from start to goal. At most cfg.n_planning random samples are drawn.
Outcome<Path, PlanFail> plan(const ArmModel& arm, const JointState& start, const JointState& goal,
                             const Environment& env, Rng& rng, const PlannerConfig& cfg = {});

/// Random shortcutting: replace [t1, t2] by a direct DIMT segment whenever it is
/// shorter and valid. Duration never increases; boundary states are preserved.
Path shortcut_smooth(const Path& path, const ArmModel& arm, const Environment& env, int iterations, Rng& rng,
                     const PlannerConfig& cfg = {});

/// Uniform sampling at f_ctrl. The start state is held for the fractional
/// remainder so the duration is an integer number of control steps and the
/// final sample is exactly the path's end state.
Trajectory discretize(const Path& path, double f_ctrl = kControlRate);

struct ValidityReport {
  bool position_limits = true;
  bool velocity_limits = true;
  bool acceleration_limits = true;
  bool collision_free = true;
  bool boundary = true;
  bool goal_match = true;
  bool finite_difference = true;
  double fd_velocity_rms = 0.0;

  bool ok() const {
    return position_limits && velocity_limits && acceleration_limits && collision_free && boundary && goal_match &&
           finite_difference;
  }
  std::string summary() const;
};

/// The validity suite every emitted throwing trajectory must pass. Acceleration
/// bounds are checked on successive sample velocities, which is exact for the
/// piecewise-constant-acceleration profiles the planner produces. Collision
/// is checked at every sample, which is finer than the planner's dt_col grid.
ValidityReport validate_trajectory(const Trajectory& traj, const ArmModel& arm, const Environment& env,
                                   const JointState& goal, double tol = 1e-6);

}  // namespace ringtoss
