#include "ringtoss/nn/checkpoint.hpp"

#include <cstdio>
#include <fstream>

#include "ringtoss/types.hpp"

namespace ringtoss::nn {

Json to_json(const DenseNet& net) {
  Json layers = Json::array();
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto w = net.weight(l);
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      rows.push_back(std::vector<double>(w.row(r).data(), w.row(r).data() + w.cols()));
    }
    const auto b = net.bias(l);
    layers.push_back({{"weights", rows}, {"bias", std::vector<double>(b.data(), b.data() + b.size())}});
  }
  return {{"widths", net.widths()}, {"activation", to_string(net.activation())}, {"layers", layers}};
}

DenseNet dense_from_json(const Json& j) {
  try {
    DenseNet net(j.at("widths").get<std::vector<int>>(), parse_activation(j.at("activation").get<std::string>()));
    const Json& layers = j.at("layers");
    if (static_cast<int>(layers.size()) != net.num_layers()) throw ShapeMismatch("checkpoint: layer count mismatch");
    for (int l = 0; l < net.num_layers(); ++l) {
      auto w = net.weight(l);
      const Json& rows = layers[static_cast<std::size_t>(l)].at("weights");
      if (static_cast<Eigen::Index>(rows.size()) != w.rows()) throw ShapeMismatch("checkpoint: weight rows mismatch");
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        const auto row = rows[static_cast<std::size_t>(r)].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(row.size()) != w.cols()) throw ShapeMismatch("checkpoint: weight cols mismatch");
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = row[static_cast<std::size_t>(c)];
      }
      const auto bias = layers[static_cast<std::size_t>(l)].at("bias").get<std::vector<double>>();
      auto b = net.bias(l);
      if (static_cast<Eigen::Index>(bias.size()) != b.size()) throw ShapeMismatch("checkpoint: bias size mismatch");
      for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = bias[static_cast<std::size_t>(i)];
    }
    return net;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("checkpoint: malformed network: ") + e.what());
  }
}

Json to_json(const Normalizer& n) {
  return {{"mean", std::vector<double>(n.mean.data(), n.mean.data() + n.mean.size())},
          {"std", std::vector<double>(n.std.data(), n.std.data() + n.std.size())}};
}

Normalizer normalizer_from_json(const Json& j) {
  try {
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto sd = j.at("std").get<std::vector<double>>();
    if (mean.size() != sd.size()) throw ShapeMismatch("checkpoint: normalizer mean/std size mismatch");
    Normalizer n;
    n.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    n.std = Eigen::Map<const Vector>(sd.data(), static_cast<Eigen::Index>(sd.size()));
    return n;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("checkpoint: malformed normalizer: ") + e.what());
  }
}

Json to_json(const AdamConfig& cfg) {
  return {{"lr", cfg.lr}, {"beta1", cfg.beta1}, {"beta2", cfg.beta2}, {"eps", cfg.eps},
          {"weight_decay", cfg.weight_decay}};
}

AdamConfig adam_config_from_json(const Json& j) {
  AdamConfig cfg;
  cfg.lr = j.value("lr", cfg.lr);
  cfg.beta1 = j.value("beta1", cfg.beta1);
  cfg.beta2 = j.value("beta2", cfg.beta2);
  cfg.eps = j.value("eps", cfg.eps);
  cfg.weight_decay = j.value("weight_decay", cfg.weight_decay);
  return cfg;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << j.dump() << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot move " + tmp + " to " + path);
}

std::string fnv1a_hex(const void* data, std::size_t size) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ringtoss::nn
