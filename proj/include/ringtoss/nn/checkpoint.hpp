#pragma once

#include <string>

#include "json.hpp"
#include "ringtoss/nn/adam.hpp"
#include "ringtoss/nn/dense.hpp"
#include "ringtoss/nn/normalizer.hpp"

namespace ringtoss::nn {

using Json = nlohmann::json;

/// {widths, activation, layers: [{weights: [[...]], bias: [...]}]}
Json to_json(const DenseNet& net);
DenseNet dense_from_json(const Json& j);

Json to_json(const Normalizer& n);
Normalizer normalizer_from_json(const Json& j);

Json to_json(const AdamConfig& cfg);
AdamConfig adam_config_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// FNV-1a over raw bytes, rendered as 16 hex digits.
std::string fnv1a_hex(const void* data, std::size_t size);

}  // namespace ringtoss::nn
