#include "ringtoss/nn/adam.hpp"

#include <cmath>

#include "ringtoss/types.hpp"

namespace ringtoss::nn {

Adam::Adam(AdamConfig cfg, Eigen::Index n_params)
    : cfg_(cfg), m_(Eigen::VectorXd::Zero(n_params)), v_(Eigen::VectorXd::Zero(n_params)) {}

void Adam::step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ShapeMismatch("Adam::step: parameter/gradient size does not match optimizer state");
  }
  ++t_;
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double decay = 1.0 - cfg_.lr * cfg_.weight_decay;
  double* p = params.data();
  const double* g = grads.data();
  double* m = m_.data();
  double* v = v_.data();
  for (Eigen::Index i = 0; i < m_.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double mhat = m[i] / c1, vhat = v[i] / c2;
    p[i] = (p[i] - cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps)) * decay;
  }
}

}  // namespace ringtoss::nn
