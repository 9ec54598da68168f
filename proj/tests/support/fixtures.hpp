#pragma once

#include <vector>

#include "ringtoss/collect.hpp"
#include "ringtoss/experiment_config.hpp"

namespace ringtoss::testing {

inline const ExperimentConfig& default_config() {
  static const ExperimentConfig cfg = load_experiment_config(default_experiment_config_path());
  return cfg;
}

inline const World& default_world() { return default_config().world; }

/// Planned throws at fixed targets, computed once per test binary.
inline const std::vector<PlannedThrow>& planned_throws(std::size_t count = 8) {
  static std::vector<PlannedThrow> cache;
  while (cache.size() < count) {
    const std::size_t i = cache.size();
    Rng rng = make_rng(20240611, i);
    StageStats stats;
    const Target target{1.5 + 0.07 * static_cast<double>(i % 8), 0.0};
    auto planned = plan_throw(default_world(), target, rng, stats, 5000);
    cache.push_back(std::move(planned).value());
  }
  return cache;
}

}  // namespace ringtoss::testing
