#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ringtoss/rng.hpp"
#include "ringtoss/types.hpp"

namespace ringtoss::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;

enum class Activation { LeakyRelu, Swish };

inline constexpr double kLeakySlope = 0.01;

std::string to_string(Activation act);
Activation parse_activation(const std::string& name);

/// Elementwise activation and its derivative with respect to the pre-activation.
void activate(Activation act, const Matrix& pre, Matrix& out);
void activate_derivative(Activation act, const Matrix& pre, Matrix& out);

/// Fully connected chain; the activation follows every layer but the last.
/// All weights and biases live in one flat vector (layer by layer: W row-major
/// [out x in], then b), which is also the layout of gradients and optimizer state.
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(std::vector<int> widths, Activation act);

  const std::vector<int>& widths() const { return widths_; }
  Activation activation() const { return act_; }
  int input_width() const { return widths_.front(); }
  int output_width() const { return widths_.back(); }
  int num_layers() const { return static_cast<int>(widths_.size()) - 1; }
  std::size_t num_params() const { return static_cast<std::size_t>(params_.size()); }

  Vector& params() { return params_; }
  const Vector& params() const { return params_; }

  MatrixMap weight(int layer);
  ConstMatrixMap weight(int layer) const;
  Eigen::Map<Vector> bias(int layer);
  Eigen::Map<const Vector> bias(int layer) const;

  /// Glorot-uniform weights, zero biases.
  void init(Rng& rng);
  void set_zero() { params_.setZero(); }

  struct Cache {
    std::vector<Matrix> inputs;  // input to each layer
    std::vector<Matrix> pre;     // pre-activations of each layer
  };

  /// Batched forward; rows of x are samples.
  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, Cache& cache) const;
  Vector forward(const Vector& x) const;

  /// Reverse pass for the batch cached by forward(x, cache). Writes parameter
  /// gradients (flat layout) into `grad` and returns dL/dx.
  Matrix backward(const Cache& cache, const Matrix& upstream, Vector& grad) const;

 private:
  std::size_t weight_offset(int layer) const { return offsets_[static_cast<std::size_t>(layer)]; }
  std::size_t bias_offset(int layer) const {
    return offsets_[static_cast<std::size_t>(layer)] +
           static_cast<std::size_t>(widths_[layer]) * static_cast<std::size_t>(widths_[layer + 1]);
  }

  std::vector<int> widths_;
  Activation act_ = Activation::LeakyRelu;
  std::vector<std::size_t> offsets_;
  Vector params_;
};

/// Parameter count of a chain with the given widths.
std::size_t param_count(const std::vector<int>& widths);

}  // namespace ringtoss::nn
