#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ringtoss/nn/adam.hpp"
#include "ringtoss/nn/checkpoint.hpp"
#include "ringtoss/nn/dense.hpp"
#include "ringtoss/nn/normalizer.hpp"
#include "ringtoss/outcome.hpp"

namespace ringtoss {

struct AeConfig {
  std::vector<int> hidden{256, 512, 256};
  int latent = 64;
  int batch = 256;
  int max_epochs = 10000;
  int patience = 200;
  double val_fraction = 0.05;
  nn::AdamConfig adam{1e-4, 0.9, 0.999, 1e-8, 1e-5};
  /// Hidden widths are scaled by cbrt(n / reference_size) when n is smaller.
  double reference_size = 9000.0;
  int min_width = 32;
  /// Wall-clock cap in seconds (0 = none); training stops at the first epoch past it.
  double time_budget = 0.0;
};

/// Hidden widths reduced for small datasets (cube root of the size ratio, floored).
std::vector<int> scaled_widths(const std::vector<int>& hidden, double n, double reference, int min_width);

struct Autoencoder {
  nn::DenseNet encoder;
  nn::DenseNet decoder;
  nn::Normalizer normalizer;

  int input_width() const { return encoder.input_width(); }
  int latent_width() const { return encoder.output_width(); }

  /// Raw parameter vectors (rows) to latents and back; normalisation is internal.
  nn::Matrix encode(const nn::Matrix& p) const;
  nn::Matrix decode(const nn::Matrix& z) const;
  nn::Vector encode(const nn::Vector& p) const;
  nn::Vector decode(const nn::Vector& z) const;
};

struct TrainingCurve {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  int best_epoch = -1;
  int epochs_run = 0;
  bool early_stopped = false;
};

struct DatasetTooSmall {
  std::size_t size = 0;
};

struct NonFiniteLoss : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AeTraining {
  Autoencoder model;
  TrainingCurve curve;
};

inline constexpr std::size_t kMinAeDataset = 100;

/// Minimises the mean squared reconstruction error of normalised rows. The
/// validation split is a seeded permutation; the returned model holds the
/// parameters of the best validation epoch.
Outcome<AeTraining, DatasetTooSmall> train_autoencoder(const nn::Matrix& data, const AeConfig& cfg,
                                                       std::uint64_t seed,
                                                       const std::function<void(int, double, double)>& on_epoch = {});

struct ReconstructionMetrics {
  double rmse_normalized = 0.0;
  double lre_percent = 0.0;
};

/// RMSE over all normalised coordinates and mean relative length error
/// (unrounded decoded length in the last column).
ReconstructionMetrics reconstruction_metrics(const Autoencoder& ae, const nn::Matrix& data);
ReconstructionMetrics reconstruction_metrics(const nn::Matrix& original, const nn::Matrix& reconstructed,
                                             const nn::Normalizer& normalizer);

nn::Json to_json(const Autoencoder& ae);
Autoencoder autoencoder_from_json(const nn::Json& j);

}  // namespace ringtoss
