#include "ringtoss/nn/dense.hpp"

#include <cmath>

#include "ringtoss/kernels/gemm.hpp"

namespace ringtoss::nn {

std::string to_string(Activation act) { return act == Activation::Swish ? "swish" : "leaky_relu"; }

Activation parse_activation(const std::string& name) {
  if (name == "swish") return Activation::Swish;
  if (name == "leaky_relu") return Activation::LeakyRelu;
  throw ConfigError("unknown activation '" + name + "'");
}

void activate(Activation act, const Matrix& pre, Matrix& out) {
  out.resize(pre.rows(), pre.cols());
  const double* x = pre.data();
  double* y = out.data();
  const Eigen::Index n = pre.size();
  if (act == Activation::LeakyRelu) {
    for (Eigen::Index i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : kLeakySlope * x[i];
  } else {
    for (Eigen::Index i = 0; i < n; ++i) y[i] = x[i] / (1.0 + std::exp(-x[i]));
  }
}

void activate_derivative(Activation act, const Matrix& pre, Matrix& out) {
  out.resize(pre.rows(), pre.cols());
  const double* x = pre.data();
  double* y = out.data();
  const Eigen::Index n = pre.size();
  if (act == Activation::LeakyRelu) {
    for (Eigen::Index i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? 1.0 : kLeakySlope;
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = 1.0 / (1.0 + std::exp(-x[i]));
      y[i] = s + x[i] * s * (1.0 - s);
    }
  }
}

std::size_t param_count(const std::vector<int>& widths) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    n += static_cast<std::size_t>(widths[i]) * static_cast<std::size_t>(widths[i + 1]) +
         static_cast<std::size_t>(widths[i + 1]);
  }
  return n;
}

DenseNet::DenseNet(std::vector<int> widths, Activation act) : widths_(std::move(widths)), act_(act) {
  if (widths_.size() < 2) throw ShapeMismatch("DenseNet needs at least an input and an output width");
  for (int w : widths_) {
    if (w <= 0) throw ShapeMismatch("DenseNet widths must be positive");
  }
  std::size_t off = 0;
  for (int l = 0; l < num_layers(); ++l) {
    offsets_.push_back(off);
    off += static_cast<std::size_t>(widths_[l]) * static_cast<std::size_t>(widths_[l + 1]) +
           static_cast<std::size_t>(widths_[l + 1]);
  }
  params_ = Vector::Zero(static_cast<Eigen::Index>(off));
}

MatrixMap DenseNet::weight(int layer) {
  return MatrixMap(params_.data() + weight_offset(layer), widths_[layer + 1], widths_[layer]);
}

ConstMatrixMap DenseNet::weight(int layer) const {
  return ConstMatrixMap(params_.data() + weight_offset(layer), widths_[layer + 1], widths_[layer]);
}

Eigen::Map<Vector> DenseNet::bias(int layer) {
  return Eigen::Map<Vector>(params_.data() + bias_offset(layer), widths_[layer + 1]);
}

Eigen::Map<const Vector> DenseNet::bias(int layer) const {
  return Eigen::Map<const Vector>(params_.data() + bias_offset(layer), widths_[layer + 1]);
}

void DenseNet::init(Rng& rng) {
  params_.setZero();
  for (int l = 0; l < num_layers(); ++l) {
    const double limit = std::sqrt(6.0 / (widths_[l] + widths_[l + 1]));
    auto w = weight(l);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = uniform(rng, -limit, limit);
  }
}

namespace {

// out = in * W^T + b
void affine(const Matrix& in, ConstMatrixMap w, Eigen::Map<const Vector> b, Matrix& out) {
  const int batch = static_cast<int>(in.rows());
  const int n_in = static_cast<int>(w.cols()), n_out = static_cast<int>(w.rows());
  out.resize(batch, n_out);
  kernels::gemm(false, true, batch, n_out, n_in, 1.0, in.data(), n_in, w.data(), n_in, 0.0, out.data(), n_out);
  out.rowwise() += b.transpose();
}

}  // namespace

Matrix DenseNet::forward(const Matrix& x) const {
  if (x.cols() != input_width()) {
    throw ShapeMismatch("DenseNet::forward: input width " + std::to_string(x.cols()) + ", expected " +
                        std::to_string(input_width()));
  }
  Matrix h = x, z;
  for (int l = 0; l < num_layers(); ++l) {
    affine(h, weight(l), bias(l), z);
    if (l + 1 < num_layers()) activate(act_, z, h); else h.swap(z);
  }
  return h;
}

Matrix DenseNet::forward(const Matrix& x, Cache& cache) const {
  if (x.cols() != input_width()) {
    throw ShapeMismatch("DenseNet::forward: input width " + std::to_string(x.cols()) + ", expected " +
                        std::to_string(input_width()));
  }
  const auto L = static_cast<std::size_t>(num_layers());
  cache.inputs.resize(L);
  cache.pre.resize(L);
  cache.inputs[0] = x;
  Matrix out;
  for (std::size_t l = 0; l < L; ++l) {
    affine(cache.inputs[l], weight(static_cast<int>(l)), bias(static_cast<int>(l)), cache.pre[l]);
    if (l + 1 < L) activate(act_, cache.pre[l], cache.inputs[l + 1]); else out = cache.pre[l];
  }
  return out;
}

Vector DenseNet::forward(const Vector& x) const {
  const Matrix row = x.transpose();
  return forward(row).row(0).transpose();
}

Matrix DenseNet::backward(const Cache& cache, const Matrix& upstream, Vector& grad) const {
  const int L = num_layers();
  if (static_cast<int>(cache.pre.size()) != L) throw ShapeMismatch("DenseNet::backward: cache does not match net");
  const Eigen::Index batch = cache.inputs[0].rows();
  if (upstream.rows() != batch || upstream.cols() != output_width()) {
    throw ShapeMismatch("DenseNet::backward: upstream gradient has the wrong shape");
  }
  grad.resize(params_.size());
  Matrix delta = upstream, deriv, dx;
  for (int l = L - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    if (l + 1 < L) {
      activate_derivative(act_, cache.pre[ul], deriv);
      delta.array() *= deriv.array();
    }
    const int n_in = widths_[l], n_out = widths_[l + 1];
    const Matrix& in = cache.inputs[ul];
    // dW = delta^T * in  [out x in]
    kernels::gemm(true, false, n_out, n_in, static_cast<int>(batch), 1.0, delta.data(), n_out, in.data(), n_in, 0.0,
                  grad.data() + weight_offset(l), n_in);
    Eigen::Map<Vector> db(grad.data() + bias_offset(l), n_out);
    db.setZero();
    for (Eigen::Index r = 0; r < batch; ++r) db += delta.row(r).transpose();
    // dX = delta * W  [batch x in]
    dx.resize(batch, n_in);
    kernels::gemm(false, false, static_cast<int>(batch), n_in, n_out, 1.0, delta.data(), n_out,
                  params_.data() + weight_offset(l), n_in, 0.0, dx.data(), n_in);
    delta.swap(dx);
  }
  return delta;
}

}  // namespace ringtoss::nn
