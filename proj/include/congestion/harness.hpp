#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "congestion/environment.hpp"
#include "congestion/learner.hpp"

namespace congestion {

using Scenario = std::variant<StripScenario, NetworkScenario>;

struct ExperimentConfig {
  std::string name = "experiment";
  Scenario scenario;
  RewardScheme scheme;
  LearnerConfig learner;
  int episodes = 1;
  int trials = 1;
  std::uint64_t base_seed = 0;
  int report_interval = 1;
  /// Moving-average window applied to emitted mean curves; 0 disables.
  int smoothing_window = 0;
  /// Worker threads for trials; 0 picks the hardware concurrency.
  unsigned threads = 0;

  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Ids of the entities whose final occupancy is recorded: sections for a
/// strip, paths for a network.
std::vector<std::string> entity_ids(const Scenario& scenario);

struct MetricsSeries {
  int episodes = 0;
  int trials = 0;
  int report_interval = 1;
  std::vector<double> mean_g;                  ///< per episode, across trials
  std::vector<std::optional<double>> std_g;    ///< set on checkpoint episodes only
  std::vector<std::vector<double>> trial_g;    ///< [trial][episode]
  std::vector<std::string> entity_ids;
  std::vector<std::vector<int>> final_occupancy;  ///< [trial][entity]

  /// 1-based episode numbers carrying a standard deviation.
  std::vector<int> checkpoints() const;
};

/// Seed of trial `trial`: base_seed + trial.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

/// Runs every trial and aggregates. Pure function of the config.
MetricsSeries run_experiment(const ExperimentConfig& config);

/// Per-trial G curve and final occupancy of one trial.
struct TrialResult {
  std::vector<double> global_utility;
  std::vector<int> final_occupancy;
};
TrialResult run_trial(const ExperimentConfig& config, int trial);

struct HistogramBin {
  std::string id;
  double mean_count = 0.0;
  double std_count = 0.0;
};

/// Mean and standard deviation of final occupancy per entity across trials.
std::vector<HistogramBin> distribution_histogram(const MetricsSeries& series);

/// Final-window performance: each trial's mean G over its last `window`
/// episodes, then mean and standard error across trials.
struct FinalPerformance {
  std::vector<double> per_trial;
  double mean = 0.0;
  double std_dev = 0.0;
  double std_error = 0.0;
};
FinalPerformance final_performance(const MetricsSeries& series, int window);

/// Trailing moving average; window <= 1 returns the input unchanged.
std::vector<double> moving_average(std::span<const double> values, int window);

/// Sample mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_and_std(std::span<const double> values);

class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationLimit = 10'000'000;

struct NetworkOptimum {
  PathCounts best;
  double global_utility = 0.0;
  /// Every composition within 1e-9 of the maximum, enumeration order.
  std::vector<PathCounts> ties;
  std::uint64_t evaluated = 0;
};

/// Exhaustive search over all compositions of the agents into paths.
NetworkOptimum oracle_network_optimum(const NetworkScenario& scenario,
                                      std::uint64_t limit = kDefaultEnumerationLimit);

struct StripOptimum {
  ConsumptionVector best;
  double global_utility = 0.0;
  /// True when sections were identical and only occupancy multisets (sorted
  /// descending) were searched.
  bool multiset = false;
  std::uint64_t evaluated = 0;
};

/// Exhaustive search for the best final layout. Identical sections are
/// exchangeable, so only partitions of the agent count are scanned; otherwise
/// every composition is.
StripOptimum oracle_strip_optimum(const StripScenario& scenario,
                                  std::uint64_t limit = kDefaultEnumerationLimit);

/// Number of compositions of n into k ordered non-negative parts, saturating
/// at UINT64_MAX.
std::uint64_t composition_count(int n, int k);

}  // namespace congestion
