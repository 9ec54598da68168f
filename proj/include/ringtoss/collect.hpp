#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ringtoss/dataset_io.hpp"
#include "ringtoss/experiment_config.hpp"
#include "ringtoss/nn/checkpoint.hpp"

namespace ringtoss {

/// Per-stage counters of the collection loop. Every throw-state draw ends in
/// exactly one of the rejection buckets or in `accepted`. The goal-level
/// buckets (IK through planner_reject) together form the quick rejections.
struct StageStats {
  long targets = 0;
  long draws = 0;
  long ik_fail = 0;
  long singular = 0;
  long velocity_limit = 0;
  long collision = 0;
  long planner_reject = 0;
  long plan_budget = 0;
  long stability_reject = 0;
  long invalid = 0;
  long fit_fail = 0;
  long accepted = 0;

  long rejected() const {
    return quick_reject() + plan_budget + stability_reject + invalid +
           fit_fail;
  }
  long quick_reject() const { return ik_fail + singular + velocity_limit + collision + planner_reject; }
  double acceptance_rate() const { return draws > 0 ? static_cast<double>(accepted) / static_cast<double>(draws) : 0.0; }
  StageStats& operator+=(const StageStats& o);
  nn::Json to_json() const;
};

struct PlannedThrow {
  Target target;
  ThrowState throw_state;
  JointState goal;
  Trajectory trajectory;
  double sensitivity = 0.0;
};

struct NoThrowFound {
  long draws = 0;
};

/// Goal sampling, planning, smoothing, discretisation and the stability
/// filter for one target; retries up to `max_draws` throw-state draws.
Outcome<PlannedThrow, NoThrowFound> plan_throw(const World& world, const Target& target, Rng& rng, StageStats& stats,
                                               int max_draws);

struct CollectedItem {
  ParamRecord record;
  JointState goal;
  Trajectory trajectory;  // kept only on request
};

struct CollectResult {
  std::vector<CollectedItem> items;
  StageStats stats;
};

struct CollectionAborted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CollectOptions {
  int n = 100;
  Range r{1.0, 2.5};
  std::uint64_t seed = 1;
  int workers = 1;
  bool keep_trajectories = false;
  std::function<void(long done)> progress;
};

inline constexpr long kGuardWindow = 1000;
inline constexpr double kGuardRate = 0.01;

/// Item i uses the stream make_rng(seed, i) and is independent of the worker
/// count. Targets lie on the +x axis at radius uniform in r. Throws
/// CollectionAborted when fewer than 1% of the first 1000 draws are accepted.
CollectResult collect(const World& world, const CollectOptions& opts);

}  // namespace ringtoss
