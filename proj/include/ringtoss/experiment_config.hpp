#pragma once

#include <cstdint>
#include <string>

#include "ringtoss/arm.hpp"
#include "ringtoss/flow.hpp"
#include "ringtoss/goal_manifold.hpp"
#include "ringtoss/manifold.hpp"
#include "ringtoss/planner.hpp"
#include "ringtoss/simulator.hpp"
#include "ringtoss/vmp.hpp"

namespace ringtoss {

struct Range {
  double min = 0.0;
  double max = 0.0;
  bool contains(const Range& inner) const { return inner.min >= min && inner.max <= max; }
};

/// Everything the throw planner needs, shared read-only by workers.
struct World {
  ArmModel arm;
  TaskGeometry geometry;
  GoalSampling sampling;
  Environment env;
  PlannerConfig planner;
  BasisConfig basis = BasisConfig::uniform();
  double stability_threshold = 0.02;
  /// Throw-state draws per target before a new target is drawn.
  int draws_per_target = 10;
  /// Draws per dataset item before collection gives up on it.
  int max_draws_per_item = 5000;
};

struct ExperimentConfig {
  World world;
  std::string arm_path;
  Range r_plan{1.0, 2.5};
  Range r_exec{1.5, 2.0};
  GapModel gap;
  GapModel gap_drag_only;
  AeConfig ae;
  FlowConfig cfm;
  int n_collect = 9000;
  int n_small = 900;
  int n_holdout = 100;
  int n_flow_data = 60;
  int eval_seeds = 3;
  int eval_targets = 10;
  double generalize_r = 1.2;
  int n_unconditional = 50;
  int workers = 1;
  std::uint64_t seed = 1;
  /// Hash of the configuration and arm file contents; keys cached artifacts.
  std::string hash;

  void validate() const;
};

/// Reads an experiment INI. `arm_override` replaces the [experiment] arm key;
/// relative arm paths resolve against the config file's directory.
ExperimentConfig load_experiment_config(const std::string& path, const std::string& arm_override = {});
ExperimentConfig load_experiment_config(const IniConfig& cfg, const std::string& base_dir,
                                        const std::string& arm_override = {});

std::string default_experiment_config_path();

}  // namespace ringtoss
