#include "ringtoss/vmp.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace ringtoss {

BasisConfig BasisConfig::uniform(int K) {
  if (K < 2) throw DomainError("BasisConfig: need at least two bases");
  BasisConfig cfg;
  cfg.centers = Eigen::VectorXd::LinSpaced(K, 0.0, 1.0);
  const double spacing = 1.0 / (K - 1);
  cfg.bandwidth = 2.0 * spacing * spacing;
  return cfg;
}

void BasisConfig::validate() const {
  if (centers.size() < 2) throw ConfigError("basis: need at least two centres");
  for (Eigen::Index i = 1; i < centers.size(); ++i) {
    if (!(centers[i] > centers[i - 1])) throw ConfigError("basis: centres must be strictly increasing");
  }
  if (!(bandwidth > 0.0)) throw ConfigError("basis: bandwidth must be positive");
}

Eigen::VectorXd normalized_bases(const BasisConfig& cfg, double s) {
  Eigen::VectorXd k = (-(cfg.centers.array() - s).square() / cfg.bandwidth).exp();
  return k / k.sum();
}

BasisValues eval_bases(const BasisConfig& cfg, double s) {
  const Eigen::ArrayXd diff = s - cfg.centers.array();
  const Eigen::ArrayXd kappa = (-diff.square() / cfg.bandwidth).exp();
  const Eigen::ArrayXd n = kappa / kappa.sum();
  // d kappa_i / ds = a_i kappa_i with a_i = -2 (s - c_i) / h.
  const Eigen::ArrayXd a = -2.0 * diff / cfg.bandwidth;
  const Eigen::ArrayXd dn = n * (a - (n * a).sum());

  const double u = s * (1.0 - s);
  const double gate = u * u;
  const double dgate = 2.0 * u * (1.0 - 2.0 * s);
  return {(gate * n).matrix(), (dgate * n + gate * dn).matrix()};
}

Vec6 BoundarySpline::value(double s) const {
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * q0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * q1 + (s3 - s2) * m1;
}

Vec6 BoundarySpline::derivative(double s) const {
  const double s2 = s * s;
  return (6 * s2 - 6 * s) * q0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * q1 + (3 * s2 - 2 * s) * m1;
}

BoundarySpline boundary_spline(const Vec6& q0, const Vec6& q1, const Vec6& qd0_phase, const Vec6& qd1_phase) {
  return {q0, q1, qd0_phase, qd1_phase};
}

BoundarySpline TrajectoryParams::spline(double f_ctrl) const {
  const double seconds = static_cast<double>(length) / f_ctrl;
  return boundary_spline(q_end, q_end, Vec6::Zero(), qdot_end * seconds);
}

namespace {

TrajectoryParams boundary_of(const Trajectory& traj, int K) {
  TrajectoryParams p;
  p.weights = Eigen::MatrixXd::Zero(kNumJoints, K);
  p.q_end = traj.back().q;
  p.qdot_end = traj.back().qdot;
  p.length = static_cast<long>(traj.steps());
  return p;
}

// Stacked design matrix [Phi; Phi'] and right-hand sides [q - psi; q' * T - psi'].
void assemble(const Trajectory& traj, const BasisConfig& cfg, const TrajectoryParams& boundary, Eigen::MatrixXd& A,
              Eigen::MatrixXd& B) {
  const long L = boundary.length;
  const double seconds = static_cast<double>(L) * traj.dt;
  const BoundarySpline psi = boundary.spline(1.0 / traj.dt);
  const int K = cfg.size();
  A.resize(2 * (L + 1), K);
  B.resize(2 * (L + 1), kNumJoints);
  for (long l = 0; l <= L; ++l) {
    const double s = static_cast<double>(l) / static_cast<double>(L);
    const BasisValues b = eval_bases(cfg, s);
    A.row(l) = b.phi.transpose();
    A.row(L + 1 + l) = b.dphi.transpose();
    B.row(l) = (traj.samples[l].q - psi.value(s)).transpose();
    B.row(L + 1 + l) = (traj.samples[l].qdot * seconds - psi.derivative(s)).transpose();
  }
}

}  // namespace

Outcome<FitResult, IllConditioned> fit(const Trajectory& traj, const BasisConfig& cfg) {
  const int K = cfg.size();
  const long L = static_cast<long>(traj.steps());
  if (L < 2L * K) {
    throw DomainError("vmp::fit: trajectory has " + std::to_string(L) + " steps, need at least " +
                      std::to_string(2 * K));
  }
  TrajectoryParams params = boundary_of(traj, K);
  Eigen::MatrixXd A, B;
  assemble(traj, cfg, params, A, B);

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
  if (!(condition <= kMaxCondition)) return IllConditioned{condition};

  const Eigen::MatrixXd W = svd.solve(B);  // K x joints
  params.weights = W.transpose();
  FitResult out;
  out.params = std::move(params);
  out.condition = condition;
  out.residual_rms = std::sqrt((A * W - B).squaredNorm() / static_cast<double>(B.size()));
  return out;
}

double fit_objective(const Trajectory& traj, const BasisConfig& cfg, const TrajectoryParams& params) {
  Eigen::MatrixXd A, B;
  assemble(traj, cfg, boundary_of(traj, cfg.size()), A, B);
  return (A * params.weights.transpose() - B).squaredNorm();
}

Outcome<Trajectory, InvalidLength> reconstruct(const TrajectoryParams& params, const BasisConfig& cfg,
                                               double f_ctrl) {
  const int K = cfg.size();
  const long L = params.length;
  if (L < 2L * K) return InvalidLength{L};
  if (params.weights.rows() != kNumJoints || params.weights.cols() != K) {
    throw ShapeMismatch("vmp::reconstruct: weight matrix must be 6 x K");
  }
  Trajectory traj;
  traj.dt = 1.0 / f_ctrl;
  const double seconds = static_cast<double>(L) / f_ctrl;
  const BoundarySpline psi = params.spline(f_ctrl);
  traj.samples.resize(static_cast<std::size_t>(L) + 1);
  for (long l = 0; l <= L; ++l) {
    const double s = static_cast<double>(l) / static_cast<double>(L);
    const BasisValues b = eval_bases(cfg, s);
    JointState& x = traj.samples[static_cast<std::size_t>(l)];
    x.q = psi.value(s) + params.weights * b.phi;
    x.qdot = (psi.derivative(s) + params.weights * b.dphi) / seconds;
  }
  // Exact boundary conditions (the gate vanishes there; this removes rounding).
  traj.samples.front().q = params.q_end;
  traj.samples.front().qdot.setZero();
  traj.samples.back().q = params.q_end;
  traj.samples.back().qdot = params.qdot_end;
  return traj;
}

Eigen::VectorXd flatten(const TrajectoryParams& params) {
  const Eigen::Index K = params.weights.cols();
  Eigen::VectorXd v(kNumJoints * K + 2 * kNumJoints + 1);
  Eigen::Index k = 0;
  for (int j = 0; j < kNumJoints; ++j) {
    for (Eigen::Index i = 0; i < K; ++i) v[k++] = params.weights(j, i);
  }
  for (int j = 0; j < kNumJoints; ++j) v[k++] = params.q_end[j];
  for (int j = 0; j < kNumJoints; ++j) v[k++] = params.qdot_end[j];
  v[k] = static_cast<double>(params.length);
  return v;
}

TrajectoryParams unflatten(const Eigen::VectorXd& v, int K) {
  if (v.size() != kNumJoints * K + 2 * kNumJoints + 1) {
    throw ShapeMismatch("vmp::unflatten: expected " + std::to_string(kNumJoints * K + 2 * kNumJoints + 1) +
                        " values, got " + std::to_string(v.size()));
  }
  TrajectoryParams p;
  p.weights.resize(kNumJoints, K);
  Eigen::Index k = 0;
  for (int j = 0; j < kNumJoints; ++j) {
    for (int i = 0; i < K; ++i) p.weights(j, i) = v[k++];
  }
  for (int j = 0; j < kNumJoints; ++j) p.q_end[j] = v[k++];
  for (int j = 0; j < kNumJoints; ++j) p.qdot_end[j] = v[k++];
  p.length = std::lround(v[k]);
  return p;
}

}  // namespace ringtoss
