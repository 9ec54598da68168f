#include "ringtoss/manifold.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ringtoss/rng.hpp"

namespace ringtoss {

std::vector<int> scaled_widths(const std::vector<int>& hidden, double n, double reference, int min_width) {
  const double factor = n < reference ? std::cbrt(n / reference) : 1.0;
  std::vector<int> out;
  for (int w : hidden) out.push_back(std::max(min_width, static_cast<int>(std::lround(w * factor))));
  return out;
}

nn::Matrix Autoencoder::encode(const nn::Matrix& p) const { return encoder.forward(normalizer.apply(p)); }

nn::Matrix Autoencoder::decode(const nn::Matrix& z) const { return normalizer.invert(decoder.forward(z)); }

nn::Vector Autoencoder::encode(const nn::Vector& p) const {
  return encoder.forward(normalizer.apply(p));
}

nn::Vector Autoencoder::decode(const nn::Vector& z) const { return normalizer.invert(decoder.forward(z)); }

namespace {

nn::Matrix gather(const nn::Matrix& x, const std::vector<Eigen::Index>& rows, std::size_t begin, std::size_t end) {
  nn::Matrix out(static_cast<Eigen::Index>(end - begin), x.cols());
  for (std::size_t i = begin; i < end; ++i) out.row(static_cast<Eigen::Index>(i - begin)) = x.row(rows[i]);
  return out;
}

double mse(const nn::Matrix& a, const nn::Matrix& b) { return (a - b).squaredNorm() / static_cast<double>(a.size()); }

}  // namespace

Outcome<AeTraining, DatasetTooSmall> train_autoencoder(const nn::Matrix& data, const AeConfig& cfg,
                                                       std::uint64_t seed,
                                                       const std::function<void(int, double, double)>& on_epoch) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (n < kMinAeDataset) return DatasetTooSmall{n};
  const auto t_start = std::chrono::steady_clock::now();

  Rng rng = make_rng(seed, 0);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.val_fraction * n)));
  const std::vector<Eigen::Index> val_rows(order.begin(), order.begin() + static_cast<long>(n_val));
  std::vector<Eigen::Index> train_rows(order.begin() + static_cast<long>(n_val), order.end());

  AeTraining out;
  Autoencoder& ae = out.model;
  ae.normalizer = nn::Normalizer::fit(gather(data, train_rows, 0, train_rows.size()));
  const nn::Matrix x = ae.normalizer.apply(data);
  const nn::Matrix x_val = gather(x, val_rows, 0, val_rows.size());

  const int d = static_cast<int>(data.cols());
  const auto hidden = scaled_widths(cfg.hidden, static_cast<double>(n), cfg.reference_size, cfg.min_width);
  std::vector<int> enc_w{d}, dec_w{cfg.latent};
  enc_w.insert(enc_w.end(), hidden.begin(), hidden.end());
  enc_w.push_back(cfg.latent);
  dec_w.insert(dec_w.end(), hidden.rbegin(), hidden.rend());
  dec_w.push_back(d);
  ae.encoder = nn::DenseNet(enc_w, nn::Activation::LeakyRelu);
  ae.decoder = nn::DenseNet(dec_w, nn::Activation::LeakyRelu);
  Rng init_rng = make_rng(seed, 1);
  ae.encoder.init(init_rng);
  ae.decoder.init(init_rng);

  nn::Adam opt_enc(cfg.adam, static_cast<Eigen::Index>(ae.encoder.num_params()));
  nn::Adam opt_dec(cfg.adam, static_cast<Eigen::Index>(ae.decoder.num_params()));
  nn::DenseNet::Cache enc_cache, dec_cache;
  nn::Vector g_enc, g_dec;
  nn::Vector best_enc = ae.encoder.params(), best_dec = ae.decoder.params();
  double best_val = std::numeric_limits<double>::infinity();
  Rng shuffle_rng = make_rng(seed, 2);
  const std::size_t batch = static_cast<std::size_t>(std::max(1, cfg.batch));

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(train_rows.begin(), train_rows.end(), shuffle_rng);
    double train_sum = 0.0;
    for (std::size_t b = 0; b < train_rows.size(); b += batch) {
      const std::size_t e = std::min(train_rows.size(), b + batch);
      const nn::Matrix xb = gather(x, train_rows, b, e);
      const nn::Matrix z = ae.encoder.forward(xb, enc_cache);
      const nn::Matrix y = ae.decoder.forward(z, dec_cache);
      const double loss = mse(y, xb);
      if (!std::isfinite(loss)) throw NonFiniteLoss("autoencoder loss became non-finite at epoch " + std::to_string(epoch));
      train_sum += loss * static_cast<double>(e - b);
      const nn::Matrix dy = (2.0 / static_cast<double>(y.size())) * (y - xb);
      const nn::Matrix dz = ae.decoder.backward(dec_cache, dy, g_dec);
      ae.encoder.backward(enc_cache, dz, g_enc);
      opt_dec.step(ae.decoder.params(), g_dec);
      opt_enc.step(ae.encoder.params(), g_enc);
    }
    const double train_loss = train_sum / static_cast<double>(train_rows.size());
    const double val_loss = mse(ae.decoder.forward(ae.encoder.forward(x_val)), x_val);
    out.curve.train_loss.push_back(train_loss);
    out.curve.val_loss.push_back(val_loss);
    out.curve.epochs_run = epoch + 1;
    if (on_epoch) on_epoch(epoch, train_loss, val_loss);
    if (val_loss < best_val) {
      best_val = val_loss;
      best_enc = ae.encoder.params();
      best_dec = ae.decoder.params();
      out.curve.best_epoch = epoch;
    } else if (epoch - out.curve.best_epoch >= cfg.patience) {
      out.curve.early_stopped = true;
      break;
    }
    if (cfg.time_budget > 0.0) {
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
      if (elapsed > cfg.time_budget) break;
    }
  }
  ae.encoder.params() = best_enc;
  ae.decoder.params() = best_dec;
  return out;
}

ReconstructionMetrics reconstruction_metrics(const nn::Matrix& original, const nn::Matrix& reconstructed,
                                             const nn::Normalizer& normalizer) {
  if (original.rows() == 0) throw DomainError("reconstruction_metrics: empty evaluation set");
  if (original.rows() != reconstructed.rows() || original.cols() != reconstructed.cols()) {
    throw ShapeMismatch("reconstruction_metrics: shape mismatch");
  }
  ReconstructionMetrics m;
  const nn::Matrix a = normalizer.apply(original), b = normalizer.apply(reconstructed);
  m.rmse_normalized = std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
  const Eigen::Index last = original.cols() - 1;
  double lre = 0.0;
  for (Eigen::Index i = 0; i < original.rows(); ++i) {
    lre += std::abs(original(i, last) - reconstructed(i, last)) / original(i, last);
  }
  m.lre_percent = 100.0 * lre / static_cast<double>(original.rows());
  return m;
}

ReconstructionMetrics reconstruction_metrics(const Autoencoder& ae, const nn::Matrix& data) {
  return reconstruction_metrics(data, ae.decode(ae.encode(data)), ae.normalizer);
}

nn::Json to_json(const Autoencoder& ae) {
  return {{"encoder", nn::to_json(ae.encoder)},
          {"decoder", nn::to_json(ae.decoder)},
          {"normalizer", nn::to_json(ae.normalizer)}};
}

Autoencoder autoencoder_from_json(const nn::Json& j) {
  Autoencoder ae;
  ae.encoder = nn::dense_from_json(j.at("encoder"));
  ae.decoder = nn::dense_from_json(j.at("decoder"));
  ae.normalizer = nn::normalizer_from_json(j.at("normalizer"));
  if (ae.encoder.input_width() != ae.decoder.output_width() || ae.encoder.output_width() != ae.decoder.input_width() ||
      ae.normalizer.width() != ae.encoder.input_width()) {
    throw ShapeMismatch("autoencoder checkpoint: inconsistent widths");
  }
  return ae;
}

}  // namespace ringtoss
