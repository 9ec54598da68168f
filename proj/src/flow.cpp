#include "ringtoss/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace ringtoss {

FlowModel FlowModel::create(int data_dim, const FlowConfig& cfg, Rng& rng) {
  FlowModel m;
  std::vector<int> widths{data_dim + 1 + kConditionDim + 1};
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(data_dim);
  m.net = nn::DenseNet(widths, nn::Activation::Swish);
  m.net.init(rng);
  m.cond_normalizer = nn::Normalizer::identity(kConditionDim);
  m.data_normalizer = nn::Normalizer::identity(data_dim);
  m.p_drop = cfg.p_drop;
  m.guidance = cfg.guidance;
  m.validate();
  return m;
}

void FlowModel::validate() const {
  if (!(p_drop >= 0.0 && p_drop <= 1.0)) throw DomainError("flow: p_drop must lie in [0, 1]");
  if (!(guidance >= 0.0)) throw DomainError("flow: guidance scale must be non-negative");
  if (net.input_width() != net.output_width() + 2 + kConditionDim) throw ShapeMismatch("flow: input width mismatch");
}

nn::Matrix FlowModel::assemble(const nn::Matrix& z, const nn::Vector& u, const nn::Matrix& c_norm,
                               const nn::Vector& mask) const {
  const Eigen::Index n = z.rows(), d = z.cols();
  if (d != data_dim() || u.size() != n || c_norm.rows() != n || c_norm.cols() != kConditionDim || mask.size() != n) {
    throw ShapeMismatch("flow: inconsistent batch shapes");
  }
  nn::Matrix x(n, input_dim());
  x.leftCols(d) = z;
  x.col(d) = u;
  x.middleCols(d + 1, kConditionDim) = c_norm;
  x.col(d + 1 + kConditionDim) = mask;
  return x;
}

nn::Matrix FlowModel::velocity(const nn::Matrix& z, const nn::Vector& u, const nn::Matrix& c_norm,
                               const nn::Vector& mask) const {
  return net.forward(assemble(z, u, c_norm, mask));
}

nn::Matrix combine_guidance(const nn::Matrix& v_cond, const nn::Matrix& v_uncond, double s_g) {
  // This form is exact at s_g = 0 and s_g = 1.
  return (1.0 - s_g) * v_uncond + s_g * v_cond;
}

VelocityField guided_field(const FlowModel& model, const nn::Matrix& conditions, double s_g) {
  // A model trained with every condition dropped has no conditional branch.
  if (model.p_drop >= 1.0) return unconditional_field(model);
  const Eigen::Index n = conditions.rows();
  nn::Matrix c2 = nn::Matrix::Zero(2 * n, kConditionDim);
  c2.topRows(n) = model.cond_normalizer.apply(conditions);
  nn::Vector mask = nn::Vector::Zero(2 * n);
  mask.head(n).setOnes();
  return [&model, c2 = std::move(c2), mask = std::move(mask), n, s_g](const nn::Matrix& z, double u) {
    nn::Matrix zz(2 * n, z.cols());
    zz.topRows(n) = z;
    zz.bottomRows(n) = z;
    const nn::Matrix v = model.velocity(zz, nn::Vector::Constant(2 * n, u), c2, mask);
    return combine_guidance(v.topRows(n), v.bottomRows(n), s_g);
  };
}

VelocityField unconditional_field(const FlowModel& model) {
  return [&model](const nn::Matrix& z, double u) {
    const Eigen::Index n = z.rows();
    return model.velocity(z, nn::Vector::Constant(n, u), nn::Matrix::Zero(n, kConditionDim), nn::Vector::Zero(n));
  };
}

nn::Matrix integrate_midpoint(const VelocityField& field, nn::Matrix z, int n_steps) {
  if (n_steps < 1) throw DomainError("integrate_midpoint: need at least one step");
  const double h = 1.0 / n_steps;
  for (int k = 0; k < n_steps; ++k) {
    const double u = k * h;
    const nn::Matrix half = z + (0.5 * h) * field(z, u);
    z += h * field(half, u + 0.5 * h);
  }
  return z;
}

namespace {

nn::Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  nn::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gaussian(rng);
  return m;
}

}  // namespace

double cfm_training_step(FlowModel& model, const nn::Matrix& z_tau_raw, const nn::Matrix& conditions, nn::Adam& adam,
                         Rng& rng) {
  const Eigen::Index n = z_tau_raw.rows();
  if (n == 0) throw DomainError("cfm_training_step: empty batch");
  if (conditions.rows() != n || conditions.cols() != kConditionDim) throw ShapeMismatch("cfm: condition batch shape");
  const nn::Matrix z_tau = model.data_normalizer.apply(z_tau_raw);
  const nn::Matrix z_noise = normal_matrix(n, z_tau.cols(), rng);
  nn::Vector u(n), mask(n);
  nn::Matrix c = model.cond_normalizer.apply(conditions);
  for (Eigen::Index i = 0; i < n; ++i) {
    u[i] = uniform(rng, 0.0, 1.0);
    const bool drop = uniform(rng, 0.0, 1.0) < model.p_drop;
    mask[i] = drop ? 0.0 : 1.0;
    if (drop) c.row(i).setZero();
  }
  nn::Matrix zu = z_noise;
  for (Eigen::Index i = 0; i < n; ++i) zu.row(i) = (1.0 - u[i]) * z_noise.row(i) + u[i] * z_tau.row(i);
  const nn::Matrix target = cfm_target(z_noise, z_tau);

  nn::DenseNet::Cache cache;
  const nn::Matrix v = model.net.forward(model.assemble(zu, u, c, mask), cache);
  const nn::Matrix diff = v - target;
  const double loss = diff.squaredNorm() / static_cast<double>(n);
  if (!std::isfinite(loss)) throw NonFiniteLoss("flow matching loss became non-finite");
  nn::Vector grad;
  model.net.backward(cache, (2.0 / static_cast<double>(n)) * diff, grad);
  adam.step(model.net.params(), grad);
  return loss;
}

FlowTraining train_flow(const nn::Matrix& data, const nn::Matrix& conditions, const FlowConfig& cfg,
                        std::uint64_t seed, bool normalize_data, const std::function<void(int, double)>& on_step) {
  if (data.rows() == 0 || data.rows() != conditions.rows()) throw DomainError("train_flow: need matching non-empty sets");
  const auto t_start = std::chrono::steady_clock::now();
  Rng init_rng = make_rng(seed, 0);
  FlowTraining out;
  out.model = FlowModel::create(static_cast<int>(data.cols()), cfg, init_rng);
  out.model.cond_normalizer = data.rows() >= 2 ? nn::Normalizer::fit(conditions) : nn::Normalizer::identity(kConditionDim);
  if (normalize_data && data.rows() >= 2) out.model.data_normalizer = nn::Normalizer::fit(data);

  nn::Adam adam(cfg.adam, static_cast<Eigen::Index>(out.model.net.num_params()));
  Rng rng = make_rng(seed, 1);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  const Eigen::Index batch = std::max(1, cfg.batch);
  nn::Matrix zb(batch, data.cols()), cb(batch, kConditionDim);
  for (int step = 0; step < cfg.epochs; ++step) {
    for (Eigen::Index i = 0; i < batch; ++i) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      zb.row(i) = data.row(order[cursor]);
      cb.row(i) = conditions.row(order[cursor]);
      ++cursor;
    }
    const double loss = cfm_training_step(out.model, zb, cb, adam, rng);
    out.loss.push_back(loss);
    out.steps = step + 1;
    if (on_step) on_step(step, loss);
    if (cfg.time_budget > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count() > cfg.time_budget) {
      break;
    }
  }
  return out;
}

nn::Matrix sample_conditional(const FlowModel& model, const nn::Matrix& conditions, int n_steps, double s_g,
                              Rng& rng) {
  const nn::Matrix z0 = normal_matrix(conditions.rows(), model.data_dim(), rng);
  return model.data_normalizer.invert(integrate_midpoint(guided_field(model, conditions, s_g), z0, n_steps));
}

nn::Matrix sample_unconditional(const FlowModel& model, int count, int n_steps, Rng& rng) {
  const nn::Matrix z0 = normal_matrix(count, model.data_dim(), rng);
  return model.data_normalizer.invert(integrate_midpoint(unconditional_field(model), z0, n_steps));
}

nn::Vector sample_latent(const FlowModel& model, const Target& target, int n_steps, double s_g, Rng& rng) {
  nn::Matrix c(1, kConditionDim);
  c << target.x, target.y;
  return sample_conditional(model, c, n_steps, s_g, rng).row(0).transpose();
}

Outcome<GeneratedThrow, InvalidLength> decode_throw(const nn::Vector& sample, const Autoencoder* ae,
                                                    const BasisConfig& basis, double f_ctrl) {
  GeneratedThrow g;
  g.latent = sample;
  const nn::Vector p = ae ? ae->decode(sample) : sample;
  if (!p.allFinite()) return InvalidLength{0};
  g.params = unflatten(p, basis.size());
  auto traj = reconstruct(g.params, basis, f_ctrl);
  if (!traj) return traj.error();
  g.trajectory = std::move(traj).value();
  return g;
}

Outcome<GeneratedThrow, InvalidLength> generate_trajectory(const FlowModel& flow, const Autoencoder& ae,
                                                           const Target& target, double s_g, int n_steps, Rng& rng,
                                                           const BasisConfig& basis) {
  return decode_throw(sample_latent(flow, target, n_steps, s_g, rng), &ae, basis);
}

nn::Json to_json(const FlowModel& model) {
  return {{"net", nn::to_json(model.net)},
          {"cond_normalizer", nn::to_json(model.cond_normalizer)},
          {"data_normalizer", nn::to_json(model.data_normalizer)},
          {"p_drop", model.p_drop},
          {"guidance", model.guidance}};
}

FlowModel flow_from_json(const nn::Json& j) {
  FlowModel m;
  m.net = nn::dense_from_json(j.at("net"));
  m.cond_normalizer = nn::normalizer_from_json(j.at("cond_normalizer"));
  m.data_normalizer = nn::normalizer_from_json(j.at("data_normalizer"));
  m.p_drop = j.at("p_drop").get<double>();
  m.guidance = j.at("guidance").get<double>();
  m.validate();
  if (m.cond_normalizer.width() != kConditionDim || m.data_normalizer.width() != m.data_dim()) {
    throw ShapeMismatch("flow checkpoint: normaliser widths");
  }
  return m;
}

}  // namespace ringtoss
