#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqzmetro/metrology.hpp"

namespace sqzmetro::cli {

/// Keys accepted in config files and as SQZMETRO_<KEY> environment variables.
const std::vector<std::string>& known_keys();

/// SQZMETRO_ followed by the upper-cased key.
std::string env_name(std::string_view key);

/// Flat key = value configuration. Lines starting with '#' are comments;
/// arrays are comma-separated lists.
class ConfigMap {
 public:
  using Getenv = std::function<const char*(const char*)>;

  /// Throws ValidationError on malformed lines, unknown or repeated keys.
  static ConfigMap parse(std::string_view text);
  static ConfigMap load(const std::string& path);

  void set(const std::string& key, std::string value);
  std::optional<std::string> get(const std::string& key) const;
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  /// Overrides every known key whose environment variable is set.
  void apply_environment(const Getenv& getenv);

 private:
  std::map<std::string, std::string> values_;
};

metrology::Engine parse_engine(std::string_view text);
std::string to_string(metrology::Engine engine);
metrology::SweepModel parse_model(std::string_view text);
std::string to_string(metrology::SweepModel model);
metrology::Probe parse_baseline(std::string_view text);
std::string to_string(metrology::Probe probe);

/// "r" or "r,theta".
SqueezeParameter parse_squeeze(std::string_view text);
std::uint64_t parse_u64(std::string_view key, std::string_view text);
int parse_int(std::string_view key, std::string_view text);

/// Requires weights, truePhases and squeeze.
metrology::ExperimentConfig to_experiment(const ConfigMap& config);
metrology::SweepConfig to_sweep(const ConfigMap& config);
WeightVector to_weights(const ConfigMap& config);

}  // namespace sqzmetro::cli
