#include "congestion/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <ostream>
#include <variant>

#include "congestion/harness.hpp"
#include "congestion/metrics_io.hpp"
#include "congestion/scenario_file.hpp"
#include "congestion/utility.hpp"

namespace congestion::cli {

namespace fs = std::filesystem;

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

std::string join_counts(const std::vector<std::string>& ids, const std::vector<int>& counts) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    s += (i ? ", " : "") + ids[i] + "=" + std::to_string(counts[i]);
  }
  return s;
}

}  // namespace

std::string output_stem(const std::string& name, std::uint64_t seed) {
  return name + "_s" + std::to_string(seed);
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto config = load_scenario_file(options.config);
    if (options.overrides.seed) config.base_seed = *options.overrides.seed;
    if (options.overrides.trials) config.trials = *options.overrides.trials;
    if (options.overrides.episodes) config.episodes = *options.overrides.episodes;
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(options.config.string(), 0, "", std::string("after command-line overrides: ") + e.what());
    }

    const auto series = run_experiment(config);
    const auto stem = output_stem(config.name, config.base_seed);
    const auto files = write_metrics(series, options.out_dir, stem, config.smoothing_window, options.plot);
    const auto final = final_performance(series, config.report_interval);

    out << config.name << ": " << scheme_tag(config.scheme) << ", " << config.trials << " trials x "
        << config.episodes << " episodes\n";
    out << "final mean G (last " << config.report_interval << " episodes): " << format_number(final.mean)
        << " +/- " << format_number(final.std_error) << " (std error)\n";
    out << "wrote " << files.curve.string() << '\n';
    out << "wrote " << files.histogram.string() << '\n';
    if (files.plot) out << "wrote " << files.plot->string() << '\n';
    return static_cast<int>(kSuccess);
  });
}

int cmd_oracle(const fs::path& config_path, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto config = load_scenario_file(config_path);
    std::vector<std::string> ids;
    std::vector<int> counts;
    double max_g = 0.0;
    if (const auto* strip = std::get_if<StripScenario>(&config.scenario)) {
      const auto best = oracle_strip_optimum(*strip);
      ids = resource_ids(strip->sections);
      counts = best.best.counts;
      max_g = best.global_utility;
      if (best.multiset) out << "sections are identical; occupancy shown as a sorted multiset\n";
    } else {
      const auto& net = std::get<NetworkScenario>(config.scenario);
      const auto best = oracle_network_optimum(net);
      ids = net.network.path_ids();
      counts = best.best.counts;
      max_g = best.global_utility;
      for (const auto& tie : best.ties) {
        if (tie != best.best) out << "tied optimum: " << join_counts(ids, tie.counts) << '\n';
      }
    }
    out << "max_G " << format_number(max_g) << '\n';
    out << "arg-max: " << join_counts(ids, counts) << '\n';
    const auto file = out_dir / (output_stem(config.name, config.base_seed) + "_oracle.csv");
    write_oracle_csv(ids, counts, max_g, file);
    out << "wrote " << file.string() << '\n';
    return static_cast<int>(kSuccess);
  });
}

int cmd_curve(const fs::path& config_path, int group, const fs::path& out_dir, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto config = load_scenario_file(config_path);
    const auto* strip = std::get_if<StripScenario>(&config.scenario);
    const auto* ra = std::get_if<scheme::ResourceAbstraction>(&config.scheme);
    if (strip == nullptr || ra == nullptr) {
      throw ConfigError(config_path.string(), 0, "reward.scheme",
                        "the abstract-reward curve needs a strip environment with an ra_resources grouping");
    }
    if (group < 0 || static_cast<std::size_t>(group) >= ra->grouping.group_count()) {
      throw ConfigError(config_path.string(), 0, "reward.groups",
                        "group index " + std::to_string(group) + " out of range (grouping has " +
                            std::to_string(ra->grouping.group_count()) + " groups)");
    }
    const auto curve = abstract_reward_curve(strip->kind, ra->grouping, strip->sections,
                                             static_cast<std::size_t>(group), strip->agents);
    const auto file = out_dir / (output_stem(config.name, config.base_seed) + "_abstract_g" + std::to_string(group) + ".csv");
    write_abstract_curve_csv(curve, file);
    long capacity = 0;
    for (const auto& s : strip->sections) capacity += s.capacity;
    if (capacity < static_cast<long>(curve.size())) {
      out << "first congested agent " << capacity + 1 << ": reward "
          << format_number(curve[static_cast<std::size_t>(capacity)].reward) << '\n';
    }
    out << "wrote " << file.string() << '\n';
    return static_cast<int>(kSuccess);
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent congestion testbed: learning runs, optimum oracles, abstract-reward curves", "congestion"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::uint64_t seed = 0;
  int trials = 0;
  int episodes = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a learning experiment and write curves and histograms");
  run_cmd->add_option("config", run_opts.config, "Scenario file")->required();
  run_cmd->add_option("--out-dir", run_opts.out_dir, "Output directory");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override experiment.seed");
  auto* trials_opt = run_cmd->add_option("--trials", trials, "Override experiment.trials");
  auto* episodes_opt = run_cmd->add_option("--episodes", episodes, "Override experiment.episodes");
  run_cmd->add_flag("--plot", run_opts.plot, "Also render the learning curve as SVG");

  fs::path oracle_config;
  fs::path oracle_out = "results";
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force the optimal occupancy and its global utility");
  oracle_cmd->add_option("config", oracle_config, "Scenario file")->required();
  oracle_cmd->add_option("--out-dir", oracle_out, "Output directory");

  fs::path curve_config;
  fs::path curve_out = "results";
  int group = 0;
  auto* curve_cmd = app.add_subcommand("curve", "Abstract reward seen while one group is overcrowded");
  curve_cmd->add_option("config", curve_config, "Scenario file")->required();
  curve_cmd->add_option("--group", group, "Index of the abstract group to overcrowd")->required();
  curve_cmd->add_option("--out-dir", curve_out, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kConfigError;
  }

  if (run_cmd->parsed()) {
    if (seed_opt->count()) run_opts.overrides.seed = seed;
    if (trials_opt->count()) run_opts.overrides.trials = trials;
    if (episodes_opt->count()) run_opts.overrides.episodes = episodes;
    return cmd_run(run_opts, out, err);
  }
  if (oracle_cmd->parsed()) return cmd_oracle(oracle_config, oracle_out, out, err);
  return cmd_curve(curve_config, group, curve_out, out, err);
}

}  // namespace congestion::cli
