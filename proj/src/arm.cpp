#include "ringtoss/arm.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ringtoss {

namespace {

Vec6 to_vec6(const std::vector<double>& v, const std::string& what) {
  if (v.size() != kNumJoints) throw ConfigError(what + ": expected 6 values");
  Vec6 out;
  for (int i = 0; i < kNumJoints; ++i) out[i] = v[i];
  return out;
}

Vec3 to_vec3(const std::vector<double>& v, std::size_t offset, const std::string& what) {
  if (v.size() < offset + 3) throw ConfigError(what + ": expected 3 values");
  return {v[offset], v[offset + 1], v[offset + 2]};
}

RigidTransform dh_transform(const DhRow& row, double q) {
  const double theta = q + row.theta_offset;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  RigidTransform t;
  t.rotation << ct, -st * ca, st * sa,
                st, ct * ca, -ct * sa,
                0.0, sa, ca;
  t.translation << row.a * ct, row.a * st, row.d;
  return t;
}

double wrap_into_limits(double q, double lo, double hi) {
  if (q > hi) {
    const double alt = q - 2.0 * kPi * std::ceil((q - hi) / (2.0 * kPi));
    q = alt >= lo ? alt : hi;
  } else if (q < lo) {
    const double alt = q + 2.0 * kPi * std::ceil((lo - q) / (2.0 * kPi));
    q = alt <= hi ? alt : lo;
  }
  return q;
}

double point_box_distance(const Vec3& p, const Box& box) {
  const Vec3 clamped = p.cwiseMax(box.lo).cwiseMin(box.hi);
  return (p - clamped).norm();
}

}  // namespace

void ArmModel::validate() const {
  for (int i = 0; i < kNumJoints; ++i) {
    if (!(q_min[i] < q_max[i])) throw ConfigError("arm: q_min must be below q_max for every joint");
    if (!(v_max[i] > 0.0)) throw ConfigError("arm: v_max must be positive");
    if (!(a_max[i] > 0.0)) throw ConfigError("arm: a_max must be positive");
  }
  if (!base_pose.is_valid(1e-9)) throw ConfigError("arm: base pose rotation is not a proper rotation");
  for (const auto& c : capsules) {
    if (c.link < 1 || c.link > kNumJoints) throw ConfigError("arm: capsule link index out of range");
    if (!(c.radius > 0.0)) throw ConfigError("arm: capsule radius must be positive");
  }
}

bool ArmModel::pair_ignored(int link_a, int link_b) const {
  for (const auto& [a, b] : ignored_pairs) {
    if ((a == link_a && b == link_b) || (a == link_b && b == link_a)) return true;
  }
  return false;
}

ArmModel load_arm(const IniConfig& cfg) {
  ArmModel arm;
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string key = "dh.row" + std::to_string(i + 1);
    const auto v = cfg.get_doubles(key);
    if (v.size() != 4) throw ConfigError(key + ": expected a, alpha, d, theta_offset");
    arm.dh[i] = {v[0], v[1], v[2], v[3]};
  }
  arm.q_min = to_vec6(cfg.get_doubles("limits.q_min"), "limits.q_min");
  arm.q_max = to_vec6(cfg.get_doubles("limits.q_max"), "limits.q_max");
  arm.v_max = to_vec6(cfg.get_doubles("limits.v_max"), "limits.v_max");
  arm.a_max = to_vec6(cfg.get_doubles("limits.a_max", {12.5, 12.5, 12.5, 15.0, 15.0, 15.0}), "limits.a_max");

  const Vec3 t = to_vec3(cfg.get_doubles("base.translation", {0.0, 0.0, 0.0}), 0, "base.translation");
  const Vec3 rpy = to_vec3(cfg.get_doubles("base.rpy", {0.0, 0.0, 0.0}), 0, "base.rpy");
  arm.base_pose.rotation = rot_z(rpy.z()) * rot_y(rpy.y()) * rot_x(rpy.x());
  arm.base_pose.translation = t;

  for (const auto& key : cfg.keys("capsules")) {
    if (key.rfind("link", 0) != 0) continue;
    std::size_t pos = 4;
    while (pos < key.size() && std::isdigit(static_cast<unsigned char>(key[pos]))) ++pos;
    if (pos == 4) throw ConfigError("capsules." + key + ": expected linkN");
    const auto v = cfg.get_doubles("capsules." + key);
    if (v.size() != 7) throw ConfigError("capsules." + key + ": expected x0,y0,z0, x1,y1,z1, radius");
    arm.capsules.push_back({std::stoi(key.substr(4, pos - 4)), to_vec3(v, 0, key), to_vec3(v, 3, key), v[6]});
  }
  const auto pairs = cfg.get_doubles("capsules.ignore_pairs", {});
  if (pairs.size() % 2 != 0) throw ConfigError("capsules.ignore_pairs: expected an even count");
  for (std::size_t i = 0; i < pairs.size(); i += 2) {
    arm.ignored_pairs.emplace_back(static_cast<int>(pairs[i]), static_cast<int>(pairs[i + 1]));
  }
  arm.nominal_q = to_vec6(cfg.get_doubles("ik.nominal_q", {0, 0, 0, 0, 0, 0}), "ik.nominal_q");
  arm.validate();
  return arm;
}

ArmModel load_arm(const std::string& path) { return load_arm(IniConfig::load(path)); }

ArmModel default_arm() { return load_arm(bundled_config_dir() + "/default_arm.ini"); }

std::array<RigidTransform, kNumJoints + 1> link_frames(const ArmModel& arm, const Vec6& q) {
  std::array<RigidTransform, kNumJoints + 1> frames;
  frames[0] = arm.base_pose;
  for (int i = 0; i < kNumJoints; ++i) frames[i + 1] = frames[i] * dh_transform(arm.dh[i], q[i]);
  return frames;
}

RigidTransform forward_kinematics(const ArmModel& arm, const Vec6& q) { return link_frames(arm, q).back(); }

Mat6 jacobian(const ArmModel& arm, const Vec6& q) {
  const auto frames = link_frames(arm, q);
  const Vec3 tip = frames.back().translation;
  Mat6 j;
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 axis = frames[i].rotation.col(2);
    const Vec3 origin = frames[i].translation;
    j.block<3, 1>(0, i) = axis.cross(tip - origin);
    j.block<3, 1>(3, i) = axis;
  }
  return j;
}

Outcome<Vec6, NoSolution> inverse_kinematics(const ArmModel& arm, const RigidTransform& target, Rng& rng,
                                             const IkOptions& options, const Vec6* initial) {
  NoSolution best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const double lambda2 = options.damping * options.damping;
  constexpr double kMaxStep = 0.3;

  for (int attempt = 0; attempt <= options.restarts; ++attempt) {
    Vec6 q;
    if (attempt == 0) {
      q = initial ? *initial : arm.nominal_q;
    } else {
      for (int i = 0; i < kNumJoints; ++i) q[i] = uniform(rng, arm.q_min[i], arm.q_max[i]);
    }

    double pos_err = 0.0, rot_err = 0.0;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
      const RigidTransform pose = forward_kinematics(arm, q);
      Vec6 err;
      err.head<3>() = target.translation - pose.translation;
      err.tail<3>() = rotation_error(pose.rotation, target.rotation);
      pos_err = err.head<3>().norm();
      rot_err = err.tail<3>().norm();
      if (pos_err < 1e-12 && rot_err < 1e-12) break;
      const Mat6 j = jacobian(arm, q);
      const Mat6 jjt = j * j.transpose() + lambda2 * Mat6::Identity();
      Vec6 step = j.transpose() * jjt.ldlt().solve(err);
      const double norm = step.norm();
      if (norm > kMaxStep) step *= kMaxStep / norm;
      q += step;
      for (int i = 0; i < kNumJoints; ++i) q[i] = wrap_into_limits(q[i], arm.q_min[i], arm.q_max[i]);
      if (norm < 1e-14) break;
    }
    const RigidTransform pose = forward_kinematics(arm, q);
    pos_err = (target.translation - pose.translation).norm();
    rot_err = rotation_error(pose.rotation, target.rotation).norm();
    if (pos_err <= options.position_tolerance && rot_err <= options.orientation_tolerance &&
        within_position_limits(arm, q)) {
      return q;
    }
    if (pos_err < best.best_position_error) best = {pos_err, rot_err};
  }
  return best;
}

double smallest_singular_value(const ArmModel& arm, const Vec6& q) {
  const Eigen::JacobiSVD<Mat6> svd(jacobian(arm, q));
  return svd.singularValues()(kNumJoints - 1);
}

Outcome<Vec6, Singular> joint_velocities_from_twist(const ArmModel& arm, const Vec6& q, const Vec6& twist) {
  const Mat6 j = jacobian(arm, q);
  const Eigen::JacobiSVD<Mat6> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma_min = svd.singularValues()(kNumJoints - 1);
  if (sigma_min < kSingularSigma) return Singular{sigma_min};
  if (sigma_min >= kWellConditionedSigma) return Vec6(svd.solve(twist));
  constexpr double kDamping = 1e-3;
  const Mat6 jjt = j * j.transpose() + kDamping * kDamping * Mat6::Identity();
  return Vec6(j.transpose() * jjt.ldlt().solve(twist));
}

bool within_position_limits(const ArmModel& arm, const Vec6& q) {
  for (int i = 0; i < kNumJoints; ++i) {
    if (!(q[i] >= arm.q_min[i] && q[i] <= arm.q_max[i])) return false;
  }
  return true;
}

bool check_state_limits(const ArmModel& arm, const JointState& state) {
  if (!within_position_limits(arm, state.q)) return false;
  for (int i = 0; i < kNumJoints; ++i) {
    if (!(std::abs(state.qdot[i]) <= arm.v_max[i])) return false;
  }
  return true;
}

std::vector<WorldCapsule> world_capsules(const ArmModel& arm, const Vec6& q) {
  const auto frames = link_frames(arm, q);
  std::vector<WorldCapsule> out;
  out.reserve(arm.capsules.size());
  for (const auto& c : arm.capsules) {
    const auto& f = frames[c.link];
    out.push_back({c.link, f.apply(c.p0), f.apply(c.p1), c.radius});
  }
  return out;
}

double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  // Closest points of two segments (Ericson, Real-Time Collision Detection 5.1.9).
  const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  constexpr double kEps = 1e-14;
  double s = 0.0, t = 0.0;
  if (a <= kEps && e <= kEps) return r.norm();
  if (a <= kEps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + d1 * s) - (q0 + d2 * t)).norm();
}

double capsule_distance(const WorldCapsule& c0, const WorldCapsule& c1) {
  return segment_segment_distance(c0.a, c0.b, c1.a, c1.b) - c0.radius - c1.radius;
}

double capsule_box_distance(const WorldCapsule& c, const Box& box) {
  // Distance from the segment to a convex set is convex in the segment parameter.
  double lo = 0.0, hi = 1.0;
  auto dist = [&](double s) { return point_box_distance(c.a + s * (c.b - c.a), box); };
  for (int i = 0; i < 80; ++i) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (dist(m1) <= dist(m2)) hi = m2; else lo = m1;
  }
  const double best = std::min({dist(0.0), dist(1.0), dist(0.5 * (lo + hi))});
  return best - c.radius;
}

bool collides(const ArmModel& arm, const Vec6& q, const Environment& env) {
  const auto caps = world_capsules(arm, q);
  for (const auto& c : caps) {
    if (std::min(c.a.z(), c.b.z()) - c.radius <= env.ground_z) return true;
    if (env.table && c.link >= env.first_table_link && capsule_box_distance(c, *env.table) <= 0.0) return true;
  }
  if (env.self_collision) {
    for (std::size_t i = 0; i < caps.size(); ++i) {
      for (std::size_t k = i + 1; k < caps.size(); ++k) {
        const int li = caps[i].link, lk = caps[k].link;
        if (std::abs(li - lk) < 2 || arm.pair_ignored(li, lk)) continue;
        if (capsule_distance(caps[i], caps[k]) <= 0.0) return true;
      }
    }
  }
  return false;
}

}  // namespace ringtoss
