#include "ringtoss/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ringtoss {

void GapModel::validate() const {
  if (!(drag_coeff >= 0.0)) throw ConfigError("gap: drag_coeff must be non-negative");
  if (!(release_time_jitter_std >= 0.0 && release_speed_scale_std >= 0.0 && release_angle_jitter_std >= 0.0)) {
    throw ConfigError("gap: standard deviations must be non-negative");
  }
}

GapModel load_gap_model(const IniConfig& cfg, const std::string& section) {
  GapModel gap;
  gap.drag_coeff = cfg.get_double(section + ".drag_coeff", 0.0);
  gap.release_time_jitter_std = cfg.get_double(section + ".jitter_std", 0.0);
  gap.release_speed_scale_std = cfg.get_double(section + ".speed_scale_std", 0.0);
  gap.release_angle_jitter_std = cfg.get_double(section + ".angle_std", 0.0);
  gap.seed = static_cast<std::uint64_t>(cfg.get_int(section + ".seed", 0));
  gap.validate();
  return gap;
}

ReleaseNoise draw_release_noise(const GapModel& gap, double dt, Rng& rng) {
  const double jitter = gaussian(rng) * gap.release_time_jitter_std;
  const double speed = gaussian(rng) * gap.release_speed_scale_std;
  const double angle = gaussian(rng) * gap.release_angle_jitter_std;
  return {static_cast<int>(std::lround(jitter / dt)), speed, angle};
}

ThrowState release_state_shifted(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom,
                                 int shift_steps) {
  const long L = static_cast<long>(traj.steps());
  const long max_forward = static_cast<long>(std::floor(geom.h_settle / traj.dt + 1e-9));
  const long shift = std::clamp<long>(shift_steps, -L, max_forward);

  const JointState& x = traj.samples[static_cast<std::size_t>(std::min(L, L + shift))];
  EeState ee;
  ee.pose = forward_kinematics(arm, x.q);
  ee.twist = jacobian(arm, x.q) * x.qdot;
  if (shift > 0) {
    const double tau = static_cast<double>(shift) * traj.dt;
    const Vec3 omega = ee.twist.tail<3>();
    ee.pose.translation += ee.twist.head<3>() * tau;
    if (omega.norm() > 0.0) {
      ee.pose.rotation = Eigen::AngleAxisd(omega.norm() * tau, omega.normalized()).toRotationMatrix() *
                         ee.pose.rotation;
    }
  }
  return ee_to_ring(ee, geom);
}

ThrowState apply_release_noise(ThrowState state, const ReleaseNoise& noise) {
  state.lin_vel = rot_z(noise.angle) * state.lin_vel * (1.0 + noise.speed_scale);
  return state;
}

ThrowState release_state(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom, const GapModel& gap,
                         Rng& rng) {
  const ReleaseNoise noise = draw_release_noise(gap, traj.dt, rng);
  return apply_release_noise(release_state_shifted(traj, arm, geom, noise.shift_steps), noise);
}

namespace {

struct Point {
  Vec3 p;
  Vec3 v;
};

Point derivative(const Point& s, double g, double c) { return {s.v, Vec3(0.0, 0.0, -g) - c * s.v}; }

Point rk4(const Point& s, double h, double g, double c) {
  auto add = [](const Point& a, const Point& k, double f) { return Point{a.p + f * k.p, a.v + f * k.v}; };
  const Point k1 = derivative(s, g, c);
  const Point k2 = derivative(add(s, k1, 0.5 * h), g, c);
  const Point k3 = derivative(add(s, k2, 0.5 * h), g, c);
  const Point k4 = derivative(add(s, k3, h), g, c);
  return {s.p + (h / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
          s.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

// Cubic Hermite on [0, h] through (p0, v0) and (p1, v1), evaluated at fraction u.
Vec3 hermite(const Point& a, const Point& b, double h, double u) {
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * a.p + (u3 - 2 * u2 + u) * h * a.v + (-2 * u3 + 3 * u2) * b.p +
         (u3 - u2) * h * b.v;
}

Vec3 hermite_derivative(const Point& a, const Point& b, double h, double u) {
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * a.p + (-6 * u2 + 6 * u) * b.p) / h + (3 * u2 - 4 * u + 1) * a.v +
         (3 * u2 - 2 * u) * b.v;
}

}  // namespace

Outcome<Flight, NoLanding> simulate_flight(const ThrowState& release, const TaskGeometry& geom, double drag_coeff,
                                           double dt_int, bool record_path) {
  if (!(release.pose.translation.z() > geom.z_cyl)) {
    throw DomainError("simulate_flight: release must be above the target plane");
  }
  const double zc = geom.z_cyl;
  Flight flight;
  Point s{release.pose.translation, release.lin_vel};
  if (record_path) flight.path.push_back(s.p);
  const long max_steps = static_cast<long>(std::ceil(kMaxFlightTime / dt_int));
  for (long k = 0; k < max_steps; ++k) {
    const Point next = rk4(s, dt_int, geom.g, drag_coeff);
    if (record_path) flight.path.push_back(next.p);
    if (next.p.z() <= zc && s.p.z() > zc) {
      // Bisection on the Hermite z(u); z is above zc at u = 0 and not above at u = 1.
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hermite(s, next, dt_int, mid).z() > zc) lo = mid; else hi = mid;
      }
      const double u = 0.5 * (lo + hi);
      flight.landing = hermite(s, next, dt_int, u);
      flight.landing.z() = zc;
      flight.landing_velocity = hermite_derivative(s, next, dt_int, u);
      flight.time = (static_cast<double>(k) + u) * dt_int;
      return flight;
    }
    s = next;
  }
  return NoLanding{};
}

bool landing_success(double x, double y, const Target& target, const TaskGeometry& geom) {
  return std::hypot(x - target.x, y - target.y) <= geom.success_radius();
}

Outcome<LandingRecord, NoLanding> execute(const Trajectory& traj, const Target& target, const ArmModel& arm,
                                          const TaskGeometry& geom, const GapModel& gap, Rng& rng) {
  const ThrowState release = release_state(traj, arm, geom, gap, rng);
  if (!(release.pose.translation.z() > geom.z_cyl)) return NoLanding{};
  const auto flight = simulate_flight(release, geom, gap.drag_coeff);
  if (!flight) return NoLanding{};
  LandingRecord rec;
  rec.x_exe = flight->landing.x();
  rec.y_exe = flight->landing.y();
  rec.target = target;
  rec.success = landing_success(rec.x_exe, rec.y_exe, target, geom);
  rec.release_state = release;
  return rec;
}

double release_sensitivity(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom) {
  Vec3 landing[2];
  const int shifts[2] = {-1, 1};
  for (int i = 0; i < 2; ++i) {
    const ThrowState s = release_state_shifted(traj, arm, geom, shifts[i]);
    if (!(s.pose.translation.z() > geom.z_cyl)) return std::numeric_limits<double>::infinity();
    const auto f = simulate_flight(s, geom, 0.0);
    if (!f) return std::numeric_limits<double>::infinity();
    landing[i] = f->landing;
  }
  return (landing[0] - landing[1]).head<2>().norm();
}

bool stability_filter(const Trajectory& traj, const ArmModel& arm, const TaskGeometry& geom, double threshold_m) {
  return release_sensitivity(traj, arm, geom) <= threshold_m;
}

}  // namespace ringtoss
