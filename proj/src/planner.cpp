#include "ringtoss/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ringtoss {

namespace {

constexpr double kLimitTol = 1e-9;

bool same_state(const JointState& a, const JointState& b, double tol = 1e-12) {
  return (a.q - b.q).cwiseAbs().maxCoeff() <= tol && (a.qdot - b.qdot).cwiseAbs().maxCoeff() <= tol;
}

JointState sample_state(const ArmModel& arm, Rng& rng) {
  JointState s;
  for (int j = 0; j < kNumJoints; ++j) {
    s.q[j] = uniform(rng, arm.q_min[j], arm.q_max[j]);
    s.qdot[j] = uniform(rng, -arm.v_max[j], arm.v_max[j]);
  }
  return s;
}

struct Node {
  JointState state;
  int parent = -1;
  MotionSegment incoming;
};

Path trace(const std::vector<Node>& tree, int leaf, const MotionSegment* last) {
  Path path;
  if (last) path.segments.push_back(*last);
  for (int i = leaf; tree[i].parent >= 0; i = tree[i].parent) path.segments.push_back(tree[i].incoming);
  std::reverse(path.segments.begin(), path.segments.end());
  return path;
}

}  // namespace

PlannerConfig load_planner_config(const IniConfig& cfg) {
  PlannerConfig p;
  p.n_planning = static_cast<int>(cfg.get_int("planner.n_planning", p.n_planning));
  p.n_smoothing = static_cast<int>(cfg.get_int("planner.n_smoothing", p.n_smoothing));
  p.dt_col = cfg.get_double("planner.dt_col", p.dt_col);
  p.f_ctrl = cfg.get_double("planner.f_ctrl", p.f_ctrl);
  p.goal_bias = cfg.get_double("planner.goal_bias", p.goal_bias);
  p.duration_cap = cfg.get_double("planner.duration_cap", p.duration_cap);
  p.try_direct = cfg.get_bool("planner.try_direct", p.try_direct);
  if (p.n_planning < 0 || p.n_smoothing < 0) throw ConfigError("planner: iteration counts must be non-negative");
  if (!(p.dt_col > 0.0) || !(p.f_ctrl > 0.0) || !(p.duration_cap > 0.0)) {
    throw ConfigError("planner: dt_col, f_ctrl and duration_cap must be positive");
  }
  if (!(p.goal_bias >= 0.0 && p.goal_bias <= 1.0)) throw ConfigError("planner: goal_bias must lie in [0, 1]");
  return p;
}

double Path::duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

JointState Path::state_at(double t) const {
  if (segments.empty()) return {};
  for (const auto& s : segments) {
    if (t <= s.duration) return s.state_at(std::max(t, 0.0));
    t -= s.duration;
  }
  return segments.back().state_at(segments.back().duration);
}

JointState Path::start() const { return segments.empty() ? JointState{} : segments.front().state_at(0.0); }

JointState Path::end() const {
  return segments.empty() ? JointState{} : segments.back().state_at(segments.back().duration);
}

Path Path::slice(double t_begin, double t_end) const {
  Path out;
  double start = 0.0;
  for (const auto& s : segments) {
    const double end = start + s.duration;
    const double b = std::max(start, t_begin), e = std::min(end, t_end);
    if (e > b) out.segments.push_back(s.slice(b - start, e - start));
    start = end;
    if (start >= t_end) break;
  }
  return out;
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::StartInvalid: return "start-invalid";
    case RejectReason::GoalInvalid: return "goal-invalid";
    case RejectReason::DurationCap: return "duration-cap";
  }
  return "unknown";
}

std::optional<RejectReason> quick_reject(const ArmModel& arm, const Environment& env, const JointState& start,
                                         const JointState& goal, const PlannerConfig& cfg) {
  if (!check_state_limits(arm, start) || collides(arm, start.q, env)) return RejectReason::StartInvalid;
  if (!check_state_limits(arm, goal) || collides(arm, goal.q, env)) return RejectReason::GoalInvalid;
  if (dimt_distance(start, goal, arm) > cfg.duration_cap) return RejectReason::DurationCap;
  return std::nullopt;
}

bool segment_valid(const MotionSegment& seg, const ArmModel& arm, const Environment& env, double dt_col) {
  for (int j = 0; j < kNumJoints; ++j) {
    const auto& p = seg.joints[j];
    const auto [lo, hi] = p.position_range();
    if (lo < arm.q_min[j] - kLimitTol || hi > arm.q_max[j] + kLimitTol) return false;
    if (p.peak_speed() > arm.v_max[j] + kLimitTol) return false;
    if (p.peak_acceleration() > arm.a_max[j] + kLimitTol) return false;
  }
  const int steps = static_cast<int>(std::ceil(seg.duration / dt_col));
  for (int k = 1; k <= steps; ++k) {
    const double t = std::min(k * dt_col, seg.duration);
    if (collides(arm, seg.state_at(t).q, env)) return false;
  }
  return true;
}

Outcome<Path, PlanFail> plan(const ArmModel& arm, const JointState& start, const JointState& goal,
                             const Environment& env, Rng& rng, const PlannerConfig& cfg) {
  if (auto reason = quick_reject(arm, env, start, goal, cfg)) {
    return PlanFail{PlanFail::Kind::QuickReject, reason, 0};
  }
  if (same_state(start, goal)) {
    MotionSegment still;
    for (int j = 0; j < kNumJoints; ++j) still.joints[j] = Profile1D::hold(start.q[j], 0.0, 0.0);
    return Path{{still}};
  }

  auto connect = [&](const JointState& from, const JointState& to) -> std::optional<MotionSegment> {
    auto seg = dimt_steer(from, to, arm);
    if (!seg || !segment_valid(*seg, arm, env, cfg.dt_col)) return std::nullopt;
    return std::move(seg).value();
  };

  std::vector<Node> tree{{start, -1, {}}};
  if (cfg.try_direct) {
    if (auto seg = connect(start, goal)) return trace(tree, 0, &*seg);
  }

  for (int sample = 1; sample <= cfg.n_planning; ++sample) {
    const bool to_goal = uniform(rng, 0.0, 1.0) < cfg.goal_bias;
    const JointState target = to_goal ? goal : sample_state(arm, rng);

    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
      const double d = dimt_distance(tree[i].state, target, arm);
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    auto seg = connect(tree[nearest].state, target);
    if (!seg) continue;
    if (to_goal) return trace(tree, nearest, &*seg);

    tree.push_back({target, nearest, std::move(*seg)});
    const int added = static_cast<int>(tree.size()) - 1;
    if (auto last = connect(target, goal)) return trace(tree, added, &*last);
  }
  return PlanFail{PlanFail::Kind::Budget, std::nullopt, cfg.n_planning};
}

Path shortcut_smooth(const Path& path, const ArmModel& arm, const Environment& env, int iterations, Rng& rng,
                     const PlannerConfig& cfg) {
  Path current = path;
  for (int it = 0; it < iterations; ++it) {
    const double total = current.duration();
    if (total <= 0.0) break;
    double t1 = uniform(rng, 0.0, total), t2 = uniform(rng, 0.0, total);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 <= 1e-6) continue;

    auto seg = dimt_steer(current.state_at(t1), current.state_at(t2), arm);
    if (!seg || seg->duration >= t2 - t1 - 1e-9) continue;
    if (!segment_valid(*seg, arm, env, cfg.dt_col)) continue;

    Path next = current.slice(0.0, t1);
    next.segments.push_back(std::move(seg).value());
    for (auto& s : current.slice(t2, total).segments) next.segments.push_back(std::move(s));
    current = std::move(next);
  }
  return current;
}

Trajectory discretize(const Path& path, double f_ctrl) {
  Trajectory traj;
  traj.dt = 1.0 / f_ctrl;
  const double total = path.duration();
  const long steps = static_cast<long>(std::ceil(total * f_ctrl - 1e-9));
  const double pad = static_cast<double>(steps) * traj.dt - total;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) {
    const double t = std::max(0.0, static_cast<double>(k) * traj.dt - pad);
    traj.samples.push_back(k == steps ? path.end() : path.state_at(t));
  }
  return traj;
}

std::string ValidityReport::summary() const {
  std::ostringstream os;
  auto item = [&](const char* name, bool flag) {
    if (!flag) os << (os.tellp() > 0 ? "," : "") << name;
  };
  item("position-limits", position_limits);
  item("velocity-limits", velocity_limits);
  item("acceleration-limits", acceleration_limits);
  item("collision", collision_free);
  item("boundary", boundary);
  item("goal-match", goal_match);
  item("finite-difference", finite_difference);
  const std::string s = os.str();
  return s.empty() ? "ok" : s;
}

ValidityReport validate_trajectory(const Trajectory& traj, const ArmModel& arm, const Environment& env,
                                   const JointState& goal, double tol) {
  ValidityReport r;
  const auto& x = traj.samples;
  if (x.empty()) {
    r.boundary = r.goal_match = false;
    return r;
  }
  for (const auto& s : x) {
    if (!s.q.allFinite() || !s.qdot.allFinite()) {
      r.position_limits = r.velocity_limits = false;
      continue;
    }
    for (int j = 0; j < kNumJoints; ++j) {
      if (s.q[j] < arm.q_min[j] - kLimitTol || s.q[j] > arm.q_max[j] + kLimitTol) r.position_limits = false;
      if (std::abs(s.qdot[j]) > arm.v_max[j] + kLimitTol) r.velocity_limits = false;
    }
  }
  for (std::size_t k = 1; k < x.size(); ++k) {
    for (int j = 0; j < kNumJoints; ++j) {
      if (std::abs(x[k].qdot[j] - x[k - 1].qdot[j]) / traj.dt > arm.a_max[j] + kLimitTol) {
        r.acceleration_limits = false;
      }
    }
  }
  for (const auto& s : x) {
    if (collides(arm, s.q, env)) {
      r.collision_free = false;
      break;
    }
  }

  const JointState& a = x.front();
  const JointState& b = x.back();
  r.boundary = (a.q - b.q).cwiseAbs().maxCoeff() <= tol && a.qdot.cwiseAbs().maxCoeff() <= tol;
  r.goal_match = (b.q - goal.q).cwiseAbs().maxCoeff() <= tol && (b.qdot - goal.qdot).cwiseAbs().maxCoeff() <= tol;

  if (x.size() >= 3) {
    double sq = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
      const Vec6 fd = (x[k + 1].q - x[k - 1].q) / (2.0 * traj.dt);
      sq += (fd - x[k].qdot).squaredNorm();
      n += kNumJoints;
    }
    r.fd_velocity_rms = std::sqrt(sq / static_cast<double>(n));
    r.finite_difference = r.fd_velocity_rms <= 0.05;
  }
  return r;
}

}  // namespace ringtoss
