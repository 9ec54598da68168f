#include "ringtoss/nn/normalizer.hpp"

#include <cmath>

namespace ringtoss::nn {

Normalizer Normalizer::fit(const Matrix& data) {
  if (data.rows() < 2) throw DomainError("Normalizer::fit needs at least two rows");
  Normalizer n;
  const double rows = static_cast<double>(data.rows());
  n.mean = data.colwise().sum().transpose() / rows;
  n.std.resize(data.cols());
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    const double var = (data.col(c).array() - n.mean[c]).square().sum() / rows;
    n.std[c] = std::max(std::sqrt(var), kStdFloor);
  }
  return n;
}

Normalizer Normalizer::identity(Eigen::Index width) {
  return {Vector::Zero(width), Vector::Ones(width)};
}

Matrix Normalizer::apply(const Matrix& x) const {
  if (x.cols() != width()) throw ShapeMismatch("Normalizer::apply: width mismatch");
  Matrix out = x;
  out.rowwise() -= mean.transpose();
  out.array().rowwise() /= std.transpose().array();
  return out;
}

Matrix Normalizer::invert(const Matrix& x) const {
  if (x.cols() != width()) throw ShapeMismatch("Normalizer::invert: width mismatch");
  Matrix out = x;
  out.array().rowwise() *= std.transpose().array();
  out.rowwise() += mean.transpose();
  return out;
}

Vector Normalizer::apply(const Vector& x) const {
  if (x.size() != width()) throw ShapeMismatch("Normalizer::apply: width mismatch");
  return ((x - mean).array() / std.array()).matrix();
}

Vector Normalizer::invert(const Vector& x) const {
  if (x.size() != width()) throw ShapeMismatch("Normalizer::invert: width mismatch");
  return (x.array() * std.array()).matrix() + mean;
}

}  // namespace ringtoss::nn
