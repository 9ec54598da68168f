#pragma once

#include "ringtoss/nn/dense.hpp"

namespace ringtoss::nn {

inline constexpr double kStdFloor = 1e-8;

/// Column-wise standardisation with population statistics.
struct Normalizer {
  Vector mean;
  Vector std;

  static Normalizer fit(const Matrix& data);
  static Normalizer identity(Eigen::Index width);

  Matrix apply(const Matrix& x) const;
  Matrix invert(const Matrix& x) const;
  Vector apply(const Vector& x) const;
  Vector invert(const Vector& x) const;
  Eigen::Index width() const { return mean.size(); }
};

}  // namespace ringtoss::nn
