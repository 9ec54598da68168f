#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ringtoss/arm.hpp"
#include "ringtoss/outcome.hpp"

namespace ringtoss {

/// Constant-acceleration piece of a 1-D double-integrator motion.
struct Ramp {
  double duration = 0.0;
  double v0 = 0.0;
  double accel = 0.0;
};

/// Piecewise-constant-acceleration motion of a single joint.
struct Profile1D {
  double x0 = 0.0;
  std::vector<Ramp> ramps;

  double total_time() const;
  double position(double t) const;
  double velocity(double t) const;
  /// Acceleration of the ramp active at t (right-continuous).
  double acceleration(double t) const;
  double end_position() const { return position(total_time()); }
  double end_velocity() const { return velocity(total_time()); }
  /// Extreme positions reached over the whole profile.
  std::pair<double, double> position_range() const;
  double peak_speed() const;
  double peak_acceleration() const;
  /// Sub-profile on [t_begin, t_end], re-based to start at time 0.
  Profile1D slice(double t_begin, double t_end) const;
  /// Constant-state profile of the given duration (requires zero velocity or yields a ramp).
  static Profile1D hold(double x, double v, double duration);
};

/// Minimum-time bang-bang / bang-coast-bang profile between two boundary states.
/// Pre: |v0|, |v1| <= v_max, a_max > 0.
Profile1D dimt_steer_1d(double x0, double v0, double x1, double v1, double v_max, double a_max);
double dimt_min_time(double x0, double v0, double x1, double v1, double v_max, double a_max);

/// Smallest acceleration bound for which a profile of exactly duration T exists
/// (infinity when no bound suffices). Drives the fixed-time feasibility test.
double dimt_required_acceleration(double x0, double v0, double x1, double v1, double v_max, double T);

struct InfeasibleTime {
  double required_acceleration = 0.0;
};

/// Minimum-acceleration profile of exact duration T, or InfeasibleTime if that
/// acceleration exceeds a_max (T below the minimum time or in an infeasible window).
Outcome<Profile1D, InfeasibleTime> dimt_steer_fixed_time(double x0, double v0, double x1, double v1, double v_max,
                                                         double a_max, double T);

/// All joints moving over a common duration.
struct MotionSegment {
  std::array<Profile1D, kNumJoints> joints;
  double duration = 0.0;

  JointState state_at(double t) const;
  MotionSegment slice(double t_begin, double t_end) const;
};

struct SteerFail {};

/// Synchronised multi-joint DIMT connection: duration is the smallest common
/// feasible time not below the slowest joint's minimum time.
Outcome<MotionSegment, SteerFail> dimt_steer(const JointState& a, const JointState& b, const ArmModel& arm);

/// Cheap lower bound on the connection time (max of per-joint minimum times).
double dimt_distance(const JointState& a, const JointState& b, const ArmModel& arm);

}  // namespace ringtoss
