#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ringtoss/goal_manifold.hpp"
#include "ringtoss/manifold.hpp"
#include "ringtoss/nn/adam.hpp"
#include "ringtoss/nn/checkpoint.hpp"
#include "ringtoss/nn/dense.hpp"
#include "ringtoss/nn/normalizer.hpp"
#include "ringtoss/outcome.hpp"
#include "ringtoss/trajectory.hpp"
#include "ringtoss/vmp.hpp"

namespace ringtoss {

struct FlowConfig {
  std::vector<int> hidden{256, 512, 1024, 1024, 512, 256};
  double p_drop = 0.1;
  double guidance = 1.5;
  int batch = 450;
  int epochs = 20000;
  nn::AdamConfig adam{3e-4, 0.9, 0.999, 1e-8, 1e-6};
  int n_steps = 1000;
  double time_budget = 0.0;  // seconds, 0 = none
};

inline constexpr int kConditionDim = 2;

/// Velocity network over [z(u), u, c_normalised, mask]. `data_normalizer` maps
/// the modelled vectors into the network's space: identity for autoencoder
/// latents, a fitted standardisation for raw parameter vectors.
struct FlowModel {
  nn::DenseNet net;
  nn::Normalizer cond_normalizer;
  nn::Normalizer data_normalizer;
  double p_drop = 0.1;
  double guidance = 1.5;

  static FlowModel create(int data_dim, const FlowConfig& cfg, Rng& rng);

  int data_dim() const { return net.output_width(); }
  int input_dim() const { return net.input_width(); }

  /// Network input rows; c holds normalised conditions, mask is 1 when present.
  nn::Matrix assemble(const nn::Matrix& z, const nn::Vector& u, const nn::Matrix& c_norm,
                      const nn::Vector& mask) const;
  nn::Matrix velocity(const nn::Matrix& z, const nn::Vector& u, const nn::Matrix& c_norm,
                      const nn::Vector& mask) const;
  void validate() const;
};

/// Batched field over the rows of z at flow time u.
using VelocityField = std::function<nn::Matrix(const nn::Matrix& z, double u)>;

/// v_uncond + s (v_cond - v_uncond).
nn::Matrix combine_guidance(const nn::Matrix& v_cond, const nn::Matrix& v_uncond, double s_g);

/// Classifier-free guided field for raw conditions (one row per z row);
/// conditional and unconditional passes share one batched forward.
VelocityField guided_field(const FlowModel& model, const nn::Matrix& conditions, double s_g);
VelocityField unconditional_field(const FlowModel& model);

/// Explicit midpoint rule from u = 0 to 1 in n_steps equal steps.
nn::Matrix integrate_midpoint(const VelocityField& field, nn::Matrix z0, int n_steps);

/// The linear-path regression target z_tau - z_noise.
inline nn::Matrix cfm_target(const nn::Matrix& z_noise, const nn::Matrix& z_tau) { return z_tau - z_noise; }

/// One optimizer step on a batch of data rows (model space before
/// data_normalizer) and raw conditions. Returns the batch loss.
double cfm_training_step(FlowModel& model, const nn::Matrix& z_tau, const nn::Matrix& conditions, nn::Adam& adam,
                         Rng& rng);

struct FlowTraining {
  FlowModel model;
  std::vector<double> loss;
  int steps = 0;
};

/// Fits the normalisers on the training set and runs cfg.epochs optimizer
/// steps; each step draws cfg.batch rows by cycling through reshuffled items,
/// each with fresh noise, flow time and dropout.
FlowTraining train_flow(const nn::Matrix& data, const nn::Matrix& conditions, const FlowConfig& cfg,
                        std::uint64_t seed, bool normalize_data = false,
                        const std::function<void(int, double)>& on_step = {});

/// Samples in model space (data_normalizer inverted).
nn::Matrix sample_conditional(const FlowModel& model, const nn::Matrix& conditions, int n_steps, double s_g, Rng& rng);
nn::Matrix sample_unconditional(const FlowModel& model, int count, int n_steps, Rng& rng);
nn::Vector sample_latent(const FlowModel& model, const Target& target, int n_steps, double s_g, Rng& rng);

struct GeneratedThrow {
  nn::Vector latent;
  TrajectoryParams params;
  Trajectory trajectory;
};

/// Decodes model-space vectors to trajectories. With `ae` the vectors are
/// latents, otherwise raw parameter vectors.
Outcome<GeneratedThrow, InvalidLength> decode_throw(const nn::Vector& sample, const Autoencoder* ae,
                                                    const BasisConfig& basis, double f_ctrl = kControlRate);

Outcome<GeneratedThrow, InvalidLength> generate_trajectory(const FlowModel& flow, const Autoencoder& ae,
                                                           const Target& target, double s_g, int n_steps, Rng& rng,
                                                           const BasisConfig& basis = BasisConfig::uniform());

nn::Json to_json(const FlowModel& model);
FlowModel flow_from_json(const nn::Json& j);

}  // namespace ringtoss
