#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringtoss/config.hpp"
#include "ringtoss/outcome.hpp"
#include "ringtoss/rng.hpp"
#include "ringtoss/types.hpp"

namespace ringtoss {

/// Standard Denavit-Hartenberg row: T = Rz(q + theta_offset) Tz(d) Tx(a) Rx(alpha).
struct DhRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
};

/// Segment-swept sphere attached to link frame `link` (1..6).
struct Capsule {
  int link = 1;
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
  double radius = 0.0;
};

struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
};

/// Static scene: ground halfspace z <= ground_z, optional table box, self collision.
struct Environment {
  double ground_z = 0.0;
  std::optional<Box> table;
  bool self_collision = true;
  /// Links below this index are mounted on the table and never tested against it.
  int first_table_link = 2;

  static Environment empty() {
    Environment env;
    env.ground_z = -1e9;
    env.self_collision = false;
    return env;
  }
};

struct JointState {
  Vec6 q = Vec6::Zero();
  Vec6 qdot = Vec6::Zero();
};

struct ArmModel {
  std::array<DhRow, kNumJoints> dh{};
  Vec6 q_min = Vec6::Constant(-kPi);
  Vec6 q_max = Vec6::Constant(kPi);
  Vec6 v_max = Vec6::Constant(6.0);
  Vec6 a_max = (Vec6() << 12.5, 12.5, 12.5, 15.0, 15.0, 15.0).finished();
  RigidTransform base_pose;
  std::vector<Capsule> capsules;
  std::vector<std::pair<int, int>> ignored_pairs;
  /// Preferred IK starting posture; keeps solutions on one branch.
  Vec6 nominal_q = Vec6::Zero();

  /// Throws ConfigError when an invariant (ordered limits, positive rates) is broken.
  void validate() const;
  bool pair_ignored(int link_a, int link_b) const;
};

/// Parses an arm description (see config/default_arm.ini for the documented keys).
ArmModel load_arm(const IniConfig& cfg);
ArmModel load_arm(const std::string& path);
/// The bundled yaw-pitch-pitch-pitch-yaw-roll arm.
ArmModel default_arm();

/// World poses of frames 0 (base) through 6 (end effector).
std::array<RigidTransform, kNumJoints + 1> link_frames(const ArmModel& arm, const Vec6& q);
RigidTransform forward_kinematics(const ArmModel& arm, const Vec6& q);

/// Geometric Jacobian of the end-effector origin in the world frame, rows [v; omega].
Mat6 jacobian(const ArmModel& arm, const Vec6& q);

struct IkOptions {
  int restarts = 20;
  int max_iterations = 200;
  double damping = 1e-3;
  double position_tolerance = 1e-4;
  double orientation_tolerance = 1e-3;
};

struct NoSolution {
  double best_position_error = 0.0;
  double best_orientation_error = 0.0;
};

/// Damped least-squares IK. The first attempt starts from `initial` (or the
/// arm's nominal posture); later restarts draw uniform in-limit seeds from rng.
Outcome<Vec6, NoSolution> inverse_kinematics(const ArmModel& arm, const RigidTransform& target, Rng& rng,
                                             const IkOptions& options = {}, const Vec6* initial = nullptr);

struct Singular {
  double sigma_min = 0.0;
};

inline constexpr double kSingularSigma = 1e-4;
inline constexpr double kWellConditionedSigma = 1e-3;

/// Solves J qdot = twist. Exact for sigma_min >= 1e-3, damped least squares
/// between 1e-4 and 1e-3, Singular below 1e-4.
Outcome<Vec6, Singular> joint_velocities_from_twist(const ArmModel& arm, const Vec6& q, const Vec6& twist);

double smallest_singular_value(const ArmModel& arm, const Vec6& q);

/// Closed-interval position and velocity limit check.
bool check_state_limits(const ArmModel& arm, const JointState& state);
bool within_position_limits(const ArmModel& arm, const Vec6& q);

struct WorldCapsule {
  int link = 1;
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double radius = 0.0;
};

std::vector<WorldCapsule> world_capsules(const ArmModel& arm, const Vec6& q);

/// Signed clearance between two world capsules (negative when overlapping).
double capsule_distance(const WorldCapsule& c0, const WorldCapsule& c1);
double capsule_box_distance(const WorldCapsule& c, const Box& box);
double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

bool collides(const ArmModel& arm, const Vec6& q, const Environment& env);

}  // namespace ringtoss
