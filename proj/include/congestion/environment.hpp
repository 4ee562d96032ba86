#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "congestion/learner.hpp"
#include "congestion/resource.hpp"
#include "congestion/road_network.hpp"

namespace congestion {

enum class InitialPlacement {
  Uniform,       ///< uniform random section per agent per episode
  FirstSection,  ///< everyone starts on section 0
};

/// Beach sections or traffic lanes laid out in a line. Agents move left, stay
/// or move right for `horizon` synchronous steps; the final layout is scored.
struct StripScenario {
  std::vector<Resource> sections;
  int agents = 1;
  int horizon = 5;
  UtilityKind kind = UtilityKind::Bpd;
  InitialPlacement placement = InitialPlacement::Uniform;

  void validate() const;

  friend bool operator==(const StripScenario&, const StripScenario&) = default;
};

/// Agents pick one source-to-sink path per episode.
struct NetworkScenario {
  RoadNetwork network;
  int agents = 1;
  UtilityKind kind = UtilityKind::Bpd;

  void validate() const;

  friend bool operator==(const NetworkScenario&, const NetworkScenario&) = default;
};

namespace scheme {
struct Local {
  friend bool operator==(const Local&, const Local&) = default;
};
struct Global {
  friend bool operator==(const Global&, const Global&) = default;
};
struct Difference {
  friend bool operator==(const Difference&, const Difference&) = default;
};
struct ResourceAbstraction {
  AbstractGrouping grouping;
  friend bool operator==(const ResourceAbstraction&, const ResourceAbstraction&) = default;
};
struct PathAbstraction {
  PathGrouping grouping;
  friend bool operator==(const PathAbstraction&, const PathAbstraction&) = default;
};
}  // namespace scheme

using RewardScheme = std::variant<scheme::Local, scheme::Global, scheme::Difference,
                                  scheme::ResourceAbstraction, scheme::PathAbstraction>;

/// Short tag: "local", "global", "difference", "ra_resources", "ra_paths".
std::string scheme_tag(const RewardScheme& scheme);

enum StripAction : std::size_t { MoveLeft = 0, Stay = 1, MoveRight = 2 };
inline constexpr std::size_t kStripActions = 3;

/// Section index after `action`; the ends of the strip clamp.
std::size_t apply_strip_action(std::size_t section, std::size_t action, std::size_t sections);

struct StepParams {
  double alpha = 0.1;
  double epsilon = 0.0;
  double gamma = 1.0;
};

struct StripState {
  std::span<const Resource> sections;
  UtilityKind kind = UtilityKind::Bpd;
  const ConsumptionVector* consumption = nullptr;
  std::span<const std::size_t> positions;  ///< section of each agent
};

struct NetworkState {
  const RoadNetwork* network = nullptr;
  UtilityKind kind = UtilityKind::Bpd;
  const PathCounts* counts = nullptr;
  std::span<const std::size_t> choices;  ///< path of each agent
};

/// Per-agent rewards. Agents sharing a resource (path) get the same value.
std::vector<double> assign_rewards(const RewardScheme& scheme, const StripState& state);
std::vector<double> assign_rewards(const RewardScheme& scheme, const NetworkState& state);

/// Throws std::invalid_argument when the scheme cannot be used on the scenario.
void check_scheme(const RewardScheme& scheme, const StripScenario& scenario);
void check_scheme(const RewardScheme& scheme, const NetworkScenario& scenario);

struct StripEpisodeResult {
  ConsumptionVector consumption;
  std::vector<double> rewards;
  double global_utility = 0.0;
};

/// Optional per-step record of every agent's section (horizon + 1 rows).
using StripTrace = std::vector<std::vector<std::size_t>>;

StripEpisodeResult strip_episode(const StripScenario& scenario, std::span<QLearner> learners,
                                 const RewardScheme& scheme, const StepParams& params, Rng& env_rng,
                                 StripTrace* trace = nullptr);

struct NetworkEpisodeResult {
  PathCounts counts;
  std::vector<double> rewards;
  double global_utility = 0.0;
};

NetworkEpisodeResult network_episode(const NetworkScenario& scenario, std::span<QLearner> learners,
                                     const RewardScheme& scheme, const StepParams& params);

/// Fresh learners with tables sized for the scenario; RNG streams unseeded.
std::vector<QLearner> make_learners(const StripScenario& scenario);
std::vector<QLearner> make_learners(const NetworkScenario& scenario);

}  // namespace congestion
