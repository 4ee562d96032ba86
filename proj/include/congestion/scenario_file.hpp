#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "congestion/harness.hpp"

namespace congestion {

inline constexpr int kScenarioSchemaVersion = 1;

/// Schema violation in a scenario file. `line()` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

/// Parses and validates a YAML scenario. Every error is a ConfigError naming
/// the offending field and, where available, its line.
ExperimentConfig parse_scenario(std::string_view text, const std::string& source = "<string>");
ExperimentConfig load_scenario_file(const std::filesystem::path& file);

/// Inverse of parse_scenario: parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ExperimentConfig& config);

}  // namespace congestion
