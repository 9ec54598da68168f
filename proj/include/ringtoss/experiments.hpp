#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ringtoss/collect.hpp"
#include "ringtoss/dataset_io.hpp"
#include "ringtoss/experiment_config.hpp"
#include "ringtoss/flow.hpp"
#include "ringtoss/manifold.hpp"

namespace ringtoss {

/// Independent random streams of evaluation seed `seed_index`.
struct EvalStreams {
  std::uint64_t master = 0;
  std::uint64_t gap_seed = 0;

  EvalStreams(std::uint64_t experiment_seed, int seed_index, const GapModel& gap);
  Rng targets() const { return make_rng(master, 0); }
  Rng planner(int target, int attempt) const { return make_rng(master, 1 + 4 * static_cast<std::uint64_t>(target) + attempt); }
  Rng execution(int target, int attempt) const {
    return make_rng(gap_seed, 4 * static_cast<std::uint64_t>(target) + attempt);
  }
  Rng sampler() const { return make_rng(master, 0xF10A); }
};

/// Targets on the +x axis with radius uniform in r.
std::vector<Target> draw_targets(Rng& rng, const Range& r, int count);

/// Runs the trajectory under the gap; a flight that never lands is a failed
/// record rather than an error.
ExecutionRecord execute_throw(const ExperimentConfig& cfg, const Trajectory& traj, const Target& target,
                              const GapModel& gap, Rng& rng, long index = 0);

/// Executes dataset records at their own targets. With `ae` each record is
/// passed through encode/decode first and the decoded parameters are logged.
std::vector<ExecutionRecord> execute_records(const ExperimentConfig& cfg, const std::vector<ParamRecord>& records,
                                             const GapModel& gap, std::uint64_t seed, const Autoencoder* ae = nullptr);

enum class Method { DaMmp, Plan1, Plan2, Residual };
std::string to_string(Method m);
Method parse_method(const std::string& name);

struct ThrowOutcome {
  Target target;
  std::vector<ExecutionRecord> attempts;
  bool success = false;
  /// Set when the generator produced a trajectory violating position or velocity limits.
  bool limit_violation = false;
};

struct SeedReport {
  int seed_index = 0;
  std::vector<ThrowOutcome> throws;
  double success_rate() const;
};

struct EvalReport {
  Method method = Method::Plan1;
  std::string gap_name;
  Range range;
  std::vector<SeedReport> seeds;

  double mean_success_rate() const;
  std::vector<ExecutionRecord> final_landings() const;
  nn::Json to_json() const;
};

struct GenerativeModels {
  const Autoencoder* ae = nullptr;
  const FlowModel* flow = nullptr;
  double guidance = 1.5;
  int n_steps = 1000;
};

/// Table-I protocol: `seeds` evaluation seeds, `targets` targets each.
EvalReport evaluate(const ExperimentConfig& cfg, Method method, const GapModel& gap, const std::string& gap_name,
                    const Range& r, int seeds, int targets, const GenerativeModels& models = {});

/// Training data for the flow: planned throws in r_exec, passed through the
/// autoencoder, executed under `gap`.
struct FlowData {
  std::vector<ParamRecord> planned;
  std::vector<ExecutionRecord> executions;  // params = decoded parameters that were executed
  nn::Matrix latents;
  nn::Matrix raw;         // flattened executed parameters
  nn::Matrix conditions;  // landing points
};

FlowData build_flow_data(const ExperimentConfig& cfg, const Autoencoder& ae, const GapModel& gap, int n,
                         std::uint64_t seed);
/// Rebuilds the training matrices from an execution log carrying parameters.
FlowData flow_data_from_log(const std::vector<ExecutionRecord>& log, const Autoencoder& ae);

struct GeneralizationReport {
  double r = 1.2;
  std::vector<int> successes_per_seed;
  int throws_per_seed = 0;
  double min_latent_distance = 0.0;
  double mean_latent_distance = 0.0;
  std::vector<ExecutionRecord> landings;
  nn::Json to_json() const;
};

GeneralizationReport evaluate_generalization(const ExperimentConfig& cfg, const GenerativeModels& models,
                                             const nn::Matrix& training_latents, double r, int seeds, int throws);

/// Mean over samples and joints of the squared third finite difference of q, divided by dt^3.
double mean_squared_jerk(const Trajectory& traj);
bool within_joint_limits(const Trajectory& traj, const ArmModel& arm);

struct VariantStats {
  double mean_squared_jerk = 0.0;
  double limit_violation_rate = 0.0;
  int invalid_length = 0;
  int samples = 0;
  std::vector<Trajectory> trajectories;
};

struct NoAeAblation {
  VariantStats with_ae;
  VariantStats raw;
  nn::Json to_json() const;
};

/// Unconditional samples from the latent flow (decoded by `ae`) and from the
/// raw-parameter flow.
NoAeAblation ablate_no_ae(const ExperimentConfig& cfg, const Autoencoder& ae, const FlowModel& latent_flow,
                          const FlowModel& raw_flow, int n, int n_steps, std::uint64_t seed);

/// Per-joint profiles (sample, t, q1..q6, qd1..qd6) of the first `max_samples` trajectories.
void write_profiles_csv(const std::string& path, const std::vector<Trajectory>& trajs, int max_samples);

struct ScaleRow {
  int size = 0;
  std::vector<int> widths;
  ReconstructionMetrics metrics;
  double length_valid_fraction = 0.0;
  int epochs = 0;
  double seconds = 0.0;
};

/// Trains one autoencoder per size on the leading records of `data` and
/// scores each on `holdout`.
std::vector<ScaleRow> ablate_scale(const ExperimentConfig& cfg, const std::vector<ParamRecord>& data,
                                   const std::vector<ParamRecord>& holdout, const std::vector<int>& sizes,
                                   std::uint64_t seed, std::vector<Autoencoder>* models = nullptr);
nn::Json to_json(const std::vector<ScaleRow>& rows);

/// Fraction of decoded held-out vectors whose rounded length admits reconstruction.
double decoded_length_valid_fraction(const Autoencoder& ae, const nn::Matrix& data, int basis_count);

}  // namespace ringtoss
