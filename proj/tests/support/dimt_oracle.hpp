#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

// Independent feasibility check for a 1-D double integrator with |a| <= A and
// |v| <= V. The displacements reachable in time T with the given end
// velocities form the interval between the integrals of the lowest and the
// highest admissible velocity curves. Those curves are the pointwise min/max
// of three piecewise-linear bounds, integrated exactly between breakpoints.
namespace ringtoss::testing {

struct Line {
  double c0, c1;  // value c0 + c1 t
  double at(double t) const { return c0 + c1 * t; }
};

inline double envelope_integral(const Line (&lines)[3], double T, bool upper) {
  std::vector<double> knots{0.0, T};
  for (int i = 0; i < 3; ++i) {
    for (int k = i + 1; k < 3; ++k) {
      const double dc = lines[i].c1 - lines[k].c1;
      if (dc == 0.0) continue;
      const double t = (lines[k].c0 - lines[i].c0) / dc;
      if (t > 0.0 && t < T) knots.push_back(t);
    }
  }
  std::sort(knots.begin(), knots.end());
  auto env = [&](double t) {
    double v = lines[0].at(t);
    for (int i = 1; i < 3; ++i) v = upper ? std::min(v, lines[i].at(t)) : std::max(v, lines[i].at(t));
    return v;
  };
  double area = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    area += 0.5 * (env(knots[i - 1]) + env(knots[i])) * (knots[i] - knots[i - 1]);
  }
  return area;
}

inline bool oracle_feasible(double x0, double v0, double x1, double v1, double V, double A, double T,
                            double tol = 1e-12) {
  if (T < 0.0) return false;
  if (std::abs(v1 - v0) > A * T + tol) return false;
  const Line hi[3] = {{v0, A}, {V, 0.0}, {v1 + A * T, -A}};
  const Line lo[3] = {{v0, -A}, {-V, 0.0}, {v1 - A * T, A}};
  const double d = x1 - x0;
  return d <= envelope_integral(hi, T, true) + tol && d >= envelope_integral(lo, T, false) - tol;
}

/// Smallest feasible T: scan on a grid, then bisect inside the first feasible cell.
inline double oracle_min_time(double x0, double v0, double x1, double v1, double V, double A, double step = 1e-3,
                              double t_max = 60.0) {
  if (oracle_feasible(x0, v0, x1, v1, V, A, 0.0)) return 0.0;
  double prev = 0.0;
  for (double T = step; T <= t_max; T += step) {
    if (oracle_feasible(x0, v0, x1, v1, V, A, T)) {
      double lo = prev, hi = T;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (oracle_feasible(x0, v0, x1, v1, V, A, mid) ? hi : lo) = mid;
      }
      return hi;
    }
    prev = T;
  }
  return INFINITY;
}

}  // namespace ringtoss::testing
