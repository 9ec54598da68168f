#include "ringtoss/dimt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ringtoss {

namespace {

constexpr double kRelAccelTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

void push_ramp(Profile1D& p, double duration, double v0, double accel) {
  if (duration > 0.0) p.ramps.push_back({duration, v0, accel});
}

}  // namespace

double Profile1D::total_time() const {
  double t = 0.0;
  for (const auto& r : ramps) t += r.duration;
  return t;
}

double Profile1D::position(double t) const {
  double x = x0;
  for (const auto& r : ramps) {
    if (t <= r.duration) {
      const double tau = std::max(t, 0.0);
      return x + r.v0 * tau + 0.5 * r.accel * tau * tau;
    }
    x += r.v0 * r.duration + 0.5 * r.accel * r.duration * r.duration;
    t -= r.duration;
  }
  return x;
}

double Profile1D::velocity(double t) const {
  for (const auto& r : ramps) {
    if (t <= r.duration) return r.v0 + r.accel * std::max(t, 0.0);
    t -= r.duration;
  }
  return ramps.empty() ? 0.0 : ramps.back().v0 + ramps.back().accel * ramps.back().duration;
}

double Profile1D::acceleration(double t) const {
  for (const auto& r : ramps) {
    if (t < r.duration) return r.accel;
    t -= r.duration;
  }
  return ramps.empty() ? 0.0 : ramps.back().accel;
}

std::pair<double, double> Profile1D::position_range() const {
  double lo = x0, hi = x0, x = x0;
  for (const auto& r : ramps) {
    if (r.accel != 0.0) {
      const double tau = -r.v0 / r.accel;
      if (tau > 0.0 && tau < r.duration) {
        const double xe = x + r.v0 * tau + 0.5 * r.accel * tau * tau;
        lo = std::min(lo, xe);
        hi = std::max(hi, xe);
      }
    }
    x += r.v0 * r.duration + 0.5 * r.accel * r.duration * r.duration;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

double Profile1D::peak_speed() const {
  double peak = 0.0;
  for (const auto& r : ramps) {
    peak = std::max({peak, std::abs(r.v0), std::abs(r.v0 + r.accel * r.duration)});
  }
  return peak;
}

double Profile1D::peak_acceleration() const {
  double peak = 0.0;
  for (const auto& r : ramps) peak = std::max(peak, std::abs(r.accel));
  return peak;
}

Profile1D Profile1D::slice(double t_begin, double t_end) const {
  Profile1D out;
  out.x0 = position(t_begin);
  double start = 0.0;
  for (const auto& r : ramps) {
    const double end = start + r.duration;
    const double b = std::max(start, t_begin), e = std::min(end, t_end);
    if (e > b) push_ramp(out, e - b, r.v0 + r.accel * (b - start), r.accel);
    start = end;
    if (start >= t_end) break;
  }
  return out;
}

Profile1D Profile1D::hold(double x, double v, double duration) {
  Profile1D p;
  p.x0 = x;
  push_ramp(p, duration, v, 0.0);
  return p;
}

Profile1D dimt_steer_1d(double x0, double v0, double x1, double v1, double v_max, double a_max) {
  const double d = x1 - x0;
  Profile1D best;
  best.x0 = x0;
  double best_time = kInf;

  for (const double sigma : {1.0, -1.0}) {
    const double a = sigma * a_max;
    double vp2 = sigma * a_max * d + 0.5 * (v0 * v0 + v1 * v1);
    if (vp2 < 0.0) {
      if (vp2 < -1e-12 * (1.0 + v0 * v0 + v1 * v1)) continue;
      vp2 = 0.0;
    }
    const double vp = sigma * std::sqrt(vp2);
    const double slack = 1e-12 * (1.0 + std::abs(vp));
    if (sigma * (vp - v0) < -slack || sigma * (vp - v1) < -slack) continue;

    Profile1D p;
    p.x0 = x0;
    if (std::abs(vp) <= v_max) {
      const double t1 = std::max(0.0, (vp - v0) / a);
      const double t2 = std::max(0.0, (vp - v1) / a);
      push_ramp(p, t1, v0, a);
      push_ramp(p, t2, vp, -a);
    } else {
      const double vc = sigma * v_max;
      const double t1 = std::max(0.0, (vc - v0) / a);
      const double t3 = std::max(0.0, (vc - v1) / a);
      const double ramp_distance = (vc * vc - v0 * v0) / (2.0 * a) + (vc * vc - v1 * v1) / (2.0 * a);
      const double tc = std::max(0.0, (d - ramp_distance) / vc);
      push_ramp(p, t1, v0, a);
      push_ramp(p, tc, vc, 0.0);
      push_ramp(p, t3, vc, -a);
    }
    const double t = p.total_time();
    if (t < best_time) {
      best_time = t;
      best = std::move(p);
    }
  }
  return best;
}

double dimt_min_time(double x0, double v0, double x1, double v1, double v_max, double a_max) {
  return dimt_steer_1d(x0, v0, x1, v1, v_max, a_max).total_time();
}

namespace {

// Minimum-acceleration profile of duration T; `accel` receives the bound it needs.
Profile1D fixed_time_profile(double x0, double v0, double x1, double v1, double v_max, double T, double& accel) {
  Profile1D p;
  p.x0 = x0;
  const double d = x1 - x0;
  if (T <= 0.0) {
    const bool same = std::abs(d) <= 1e-12 && std::abs(v1 - v0) <= 1e-12;
    accel = same ? 0.0 : kInf;
    return p;
  }
  const double dv = v1 - v0;
  const double D = d - 0.5 * T * (v0 + v1);
  const double sigma = D >= 0.0 ? 1.0 : -1.0;
  const double a_bb = (2.0 * std::abs(D) + std::sqrt(4.0 * D * D + T * T * dv * dv)) / (T * T);

  if (a_bb == 0.0) {
    accel = 0.0;
    push_ramp(p, T, v0, 0.0);
    return p;
  }
  const double t1 = std::clamp(0.5 * (T + dv / (sigma * a_bb)), 0.0, T);
  const double v_switch = v0 + sigma * a_bb * t1;
  if (std::abs(v_switch) <= v_max * (1.0 + 1e-12)) {
    accel = a_bb;
    push_ramp(p, t1, v0, sigma * a_bb);
    push_ramp(p, T - t1, v_switch, -sigma * a_bb);
    return p;
  }

  // Bang-coast-bang with the coast at the velocity limit.
  const double vc = sigma * v_max;
  const double gap = sigma * (vc * T - d);
  if (gap <= 0.0) {
    accel = kInf;
    return p;
  }
  const double spread = (vc - v0) * (vc - v0) + (vc - v1) * (vc - v1);
  const double a = spread / (2.0 * gap);
  const double ta = std::abs(vc - v0) / a, tb = std::abs(vc - v1) / a;
  const double tc = T - ta - tb;
  if (tc < -1e-12 * T) {
    accel = kInf;
    return p;
  }
  accel = a;
  push_ramp(p, ta, v0, sigma * a);
  push_ramp(p, std::max(tc, 0.0), vc, 0.0);
  push_ramp(p, tb, vc, -sigma * a);
  return p;
}

}  // namespace

double dimt_required_acceleration(double x0, double v0, double x1, double v1, double v_max, double T) {
  double accel = 0.0;
  fixed_time_profile(x0, v0, x1, v1, v_max, T, accel);
  return accel;
}

Outcome<Profile1D, InfeasibleTime> dimt_steer_fixed_time(double x0, double v0, double x1, double v1, double v_max,
                                                         double a_max, double T) {
  if (T < 0.0) return InfeasibleTime{kInf};
  double accel = 0.0;
  Profile1D p = fixed_time_profile(x0, v0, x1, v1, v_max, T, accel);
  if (!(accel <= a_max * (1.0 + kRelAccelTol))) return InfeasibleTime{accel};
  // Clip rounding overshoot so the stored profile never exceeds the bound.
  for (auto& r : p.ramps) r.accel = std::clamp(r.accel, -a_max, a_max);
  return p;
}

JointState MotionSegment::state_at(double t) const {
  JointState s;
  for (int j = 0; j < kNumJoints; ++j) {
    s.q[j] = joints[j].position(t);
    s.qdot[j] = joints[j].velocity(t);
  }
  return s;
}

MotionSegment MotionSegment::slice(double t_begin, double t_end) const {
  MotionSegment out;
  t_begin = std::clamp(t_begin, 0.0, duration);
  t_end = std::clamp(t_end, t_begin, duration);
  for (int j = 0; j < kNumJoints; ++j) out.joints[j] = joints[j].slice(t_begin, t_end);
  out.duration = t_end - t_begin;
  return out;
}

double dimt_distance(const JointState& a, const JointState& b, const ArmModel& arm) {
  double t = 0.0;
  for (int j = 0; j < kNumJoints; ++j) {
    t = std::max(t, dimt_min_time(a.q[j], a.qdot[j], b.q[j], b.qdot[j], arm.v_max[j], arm.a_max[j]));
  }
  return t;
}

Outcome<MotionSegment, SteerFail> dimt_steer(const JointState& a, const JointState& b, const ArmModel& arm) {
  constexpr int kMaxRounds = 64;
  constexpr double kMaxDuration = 1e3;

  // Exact bound: the synchronised profiles must not rely on clipping.
  auto feasible = [&](int j, double T) {
    return dimt_required_acceleration(a.q[j], a.qdot[j], b.q[j], b.qdot[j], arm.v_max[j], T) <= arm.a_max[j];
  };

  double T = dimt_distance(a, b, arm);
  for (int round = 0; round < kMaxRounds; ++round) {
    int blocked = -1;
    for (int j = 0; j < kNumJoints; ++j) {
      if (!feasible(j, T)) {
        blocked = j;
        break;
      }
    }
    if (blocked < 0) {
      MotionSegment seg;
      seg.duration = T;
      for (int j = 0; j < kNumJoints; ++j) {
        auto p = dimt_steer_fixed_time(a.q[j], a.qdot[j], b.q[j], b.qdot[j], arm.v_max[j], arm.a_max[j], T);
        if (!p) return SteerFail{};
        seg.joints[j] = std::move(p).value();
      }
      return seg;
    }
    // T lies in an infeasible window of joint `blocked`: bracket its upper end, then bisect.
    double lo = T;
    double step = std::max(1e-3, 1e-3 * T);
    double hi = T + step;
    while (!feasible(blocked, hi)) {
      lo = hi;
      step *= 2.0;
      hi = T + step;
      if (hi > kMaxDuration) return SteerFail{};
    }
    for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(blocked, mid)) hi = mid; else lo = mid;
    }
    T = hi;
  }
  return SteerFail{};
}

}  // namespace ringtoss
