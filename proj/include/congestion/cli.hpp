#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace congestion::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kRuntimeError = 2 };

/// Fields a command line may override; everything else comes from the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> episodes;
};

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = "results";
  Overrides overrides;
  bool plot = false;
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err);
int cmd_curve(const std::filesystem::path& config, int group, const std::filesystem::path& out_dir,
              std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Output file stem: `<config name>_s<seed>`.
std::string output_stem(const std::string& name, std::uint64_t seed);

}  // namespace congestion::cli
