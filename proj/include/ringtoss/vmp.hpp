#pragma once

#include <Eigen/Core>

#include "ringtoss/outcome.hpp"
#include "ringtoss/trajectory.hpp"

namespace ringtoss {

/// Gated normalised Gaussian basis on the phase interval [0, 1].
struct BasisConfig {
  Eigen::VectorXd centers;
  double bandwidth = 0.0;

  int size() const { return static_cast<int>(centers.size()); }
  /// K centres uniform on [0, 1], bandwidth 2 (c_2 - c_1)^2.
  static BasisConfig uniform(int K = 30);
  void validate() const;
};

inline constexpr int kDefaultBasisCount = 30;
inline constexpr int kParamDim = kNumJoints * kDefaultBasisCount + 2 * kNumJoints + 1;  // 193

struct BasisValues {
  Eigen::VectorXd phi;
  Eigen::VectorXd dphi;  // d phi / d s
};

/// Pre-gating normalised Gaussian weights at s (they sum to one).
Eigen::VectorXd normalized_bases(const BasisConfig& cfg, double s);
BasisValues eval_bases(const BasisConfig& cfg, double s);

/// Cubic Hermite interpolant on s in [0, 1] with phase-domain end slopes.
struct BoundarySpline {
  Vec6 q0 = Vec6::Zero(), q1 = Vec6::Zero();
  Vec6 m0 = Vec6::Zero(), m1 = Vec6::Zero();

  Vec6 value(double s) const;
  Vec6 derivative(double s) const;
};

BoundarySpline boundary_spline(const Vec6& q0, const Vec6& q1, const Vec6& qd0_phase, const Vec6& qd1_phase);

struct TrajectoryParams {
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(kNumJoints, kDefaultBasisCount);  // joints x K
  Vec6 q_end = Vec6::Zero();
  Vec6 qdot_end = Vec6::Zero();
  long length = 0;  // control steps L

  /// Spline implied by the end conditions, start = (q_end, 0).
  BoundarySpline spline(double f_ctrl = kControlRate) const;
};

struct IllConditioned {
  double condition = 0.0;
};

struct FitResult {
  TrajectoryParams params;
  double residual_rms = 0.0;  // over the stacked position/velocity rows
  double condition = 0.0;
};

inline constexpr double kMaxCondition = 1e10;

/// Least squares over l = 0..L of position residuals and phase-velocity
/// residuals with unit weights. Throws DomainError when L < 2K.
Outcome<FitResult, IllConditioned> fit(const Trajectory& traj, const BasisConfig& cfg);

struct InvalidLength {
  long length = 0;
};

Outcome<Trajectory, InvalidLength> reconstruct(const TrajectoryParams& params, const BasisConfig& cfg,
                                               double f_ctrl = kControlRate);

/// Layout: weights row-major (joint-major), q_end, qdot_end, L.
Eigen::VectorXd flatten(const TrajectoryParams& params);
/// Inverse of flatten; the length slot is rounded to the nearest integer.
TrajectoryParams unflatten(const Eigen::VectorXd& v, int K = kDefaultBasisCount);

/// Sum of squared stacked residuals for given weights (the fitting objective).
double fit_objective(const Trajectory& traj, const BasisConfig& cfg, const TrajectoryParams& params);

}  // namespace ringtoss
