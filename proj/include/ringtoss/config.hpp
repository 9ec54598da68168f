#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

namespace ringtoss {

/// INI-style key/value file. Keys are addressed as "section.key"; values may
/// carry trailing `;` or `#` comments. Numeric lists are comma separated.
class IniConfig {
 public:
  IniConfig() = default;
  static IniConfig load(const std::string& path);
  static IniConfig parse(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, std::optional<std::string> fallback = {}) const;
  double get_double(const std::string& key, std::optional<double> fallback = {}) const;
  long get_int(const std::string& key, std::optional<long> fallback = {}) const;
  bool get_bool(const std::string& key, std::optional<bool> fallback = {}) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

  /// Keys present in a section, in file order.
  std::vector<std::string> keys(const std::string& section) const;

  const std::string& source() const { return source_; }

 private:
  std::optional<std::string> raw(const std::string& key) const;
  boost::property_tree::ptree tree_;
  std::string source_ = "<memory>";
};

/// Parses a comma/space separated list of doubles; throws ConfigError on junk.
std::vector<double> parse_doubles(const std::string& text, const std::string& context);

/// Directory holding the bundled configuration files.
std::string bundled_config_dir();

}  // namespace ringtoss
