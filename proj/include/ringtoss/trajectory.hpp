#pragma once

#include <cstddef>
#include <vector>

#include "ringtoss/arm.hpp"

namespace ringtoss {

inline constexpr double kControlRate = 240.0;

/// Uniformly sampled joint trajectory; sample k is at time k * dt.
struct Trajectory {
  double dt = 1.0 / kControlRate;
  std::vector<JointState> samples;

  /// Number of control steps L (samples - 1).
  std::size_t steps() const { return samples.empty() ? 0 : samples.size() - 1; }
  double duration() const { return static_cast<double>(steps()) * dt; }
  const JointState& front() const { return samples.front(); }
  const JointState& back() const { return samples.back(); }
};

}  // namespace ringtoss
