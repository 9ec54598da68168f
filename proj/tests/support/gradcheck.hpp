#pragma once

#include <algorithm>
#include <cmath>

#include "ringtoss/nn/dense.hpp"

namespace ringtoss::testing {

struct GradCheck {
  double max_rel_error = 0.0;
  double max_input_rel_error = 0.0;
};

// Relative error with a floor so that exactly-zero gradients compare absolutely.
inline double rel_error(double a, double b, double floor = 1e-4) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Compares backward() against central differences of L = sum(upstream .* net(x))
// for every parameter and every input coordinate.
inline GradCheck check_gradients(nn::DenseNet net, const nn::Matrix& x, const nn::Matrix& upstream,
                                 double h = 1e-5) {
  auto loss = [&](const nn::DenseNet& n, const nn::Matrix& in) { return (n.forward(in).array() * upstream.array()).sum(); };
  nn::DenseNet::Cache cache;
  net.forward(x, cache);
  nn::Vector grad;
  const nn::Matrix dx = net.backward(cache, upstream, grad);

  GradCheck out;
  for (Eigen::Index i = 0; i < net.params().size(); ++i) {
    const double p0 = net.params()[i];
    net.params()[i] = p0 + h;
    const double lp = loss(net, x);
    net.params()[i] = p0 - h;
    const double lm = loss(net, x);
    net.params()[i] = p0;
    out.max_rel_error = std::max(out.max_rel_error, rel_error(grad[i], (lp - lm) / (2.0 * h)));
  }
  nn::Matrix xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    xp.data()[i] = v + h;
    const double lp = loss(net, xp);
    xp.data()[i] = v - h;
    const double lm = loss(net, xp);
    xp.data()[i] = v;
    out.max_input_rel_error = std::max(out.max_input_rel_error, rel_error(dx.data()[i], (lp - lm) / (2.0 * h)));
  }
  return out;
}

inline nn::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  nn::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, -scale, scale);
  return m;
}

}  // namespace ringtoss::testing
