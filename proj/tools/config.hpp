#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "vesflex/flexset.hpp"

namespace vesflex::cli {

/// Sectioned `key = value` file with unit-suffixed keys. Unknown sections
/// or keys are input errors.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text, const std::filesystem::path& base_dir = ".");

  bool has(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  std::optional<double> maybe(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
  /// Resolves a path value relative to the config file's directory.
  std::optional<std::filesystem::path> path(const std::string& section, const std::string& key) const;
  std::string name() const { return name_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::filesystem::path base_;
  std::string name_;
};

/// Scenario block: thermal parameters, bounds, setpoint, initial state and
/// the disturbance (constant or from CSV). `horizon_override_h` replaces the
/// configured horizon for constant disturbances.
flexset::Scenario scenario_from(const Config& cfg, std::optional<double> horizon_override_h = std::nullopt);

}  // namespace vesflex::cli
