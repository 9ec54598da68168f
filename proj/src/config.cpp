#include "ringtoss/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "ringtoss/types.hpp"

namespace ringtoss {

namespace {

std::string strip(std::string s) {
  const auto cut = s.find_first_of(";#");
  if (cut != std::string::npos) s.erase(cut);
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniConfig IniConfig::parse(const std::string& text) {
  IniConfig cfg;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, cfg.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

IniConfig IniConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  IniConfig cfg = parse(buf.str());
  cfg.source_ = path;
  return cfg;
}

std::optional<std::string> IniConfig::raw(const std::string& key) const {
  const auto node = tree_.get_optional<std::string>(key);
  if (!node) return std::nullopt;
  return strip(*node);
}

bool IniConfig::has(const std::string& key) const { return raw(key).has_value(); }

std::string IniConfig::get_string(const std::string& key, std::optional<std::string> fallback) const {
  if (auto v = raw(key)) return *v;
  if (fallback) return *fallback;
  throw ConfigError(source_ + ": missing key '" + key + "'");
}

double IniConfig::get_double(const std::string& key, std::optional<double> fallback) const {
  const auto v = raw(key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(source_ + ": missing key '" + key + "'");
  }
  const auto values = parse_doubles(*v, source_ + ":" + key);
  if (values.size() != 1) throw ConfigError(source_ + ": key '" + key + "' expects one number");
  return values.front();
}

long IniConfig::get_int(const std::string& key, std::optional<long> fallback) const {
  const auto v = raw(key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(source_ + ": missing key '" + key + "'");
  }
  char* end = nullptr;
  const long value = std::strtol(v->c_str(), &end, 10);
  if (end == v->c_str() || *end != '\0') throw ConfigError(source_ + ": key '" + key + "' expects an integer");
  return value;
}

bool IniConfig::get_bool(const std::string& key, std::optional<bool> fallback) const {
  const auto v = raw(key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(source_ + ": missing key '" + key + "'");
  }
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError(source_ + ": key '" + key + "' expects a boolean");
}

std::vector<double> IniConfig::get_doubles(const std::string& key) const {
  const auto v = raw(key);
  if (!v) throw ConfigError(source_ + ": missing key '" + key + "'");
  return parse_doubles(*v, source_ + ":" + key);
}

std::vector<double> IniConfig::get_doubles(const std::string& key, std::vector<double> fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  return parse_doubles(*v, source_ + ":" + key);
}

std::vector<std::string> IniConfig::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto child = tree_.get_child_optional(section);
  if (!child) return out;
  for (const auto& kv : *child) out.push_back(kv.first);
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& context) {
  std::vector<double> out;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::string t;
  while (in >> t) {
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') throw ConfigError(context + ": '" + t + "' is not a number");
    out.push_back(value);
  }
  return out;
}

std::string bundled_config_dir() {
  if (const char* env = std::getenv("RINGTOSS_CONFIG_DIR")) return env;
#ifdef RINGTOSS_CONFIG_DIR
  return RINGTOSS_CONFIG_DIR;
#else
  return "config";
#endif
}

}  // namespace ringtoss
