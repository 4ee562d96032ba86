#include "congestion/environment.hpp"

#include <stdexcept>
#include <string>

#include "congestion/utility.hpp"

namespace congestion {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Reward for an agent on each section; unoccupied sections get 0.
std::vector<double> section_rewards(const RewardScheme& scheme, std::span<const Resource> sections,
                                    UtilityKind kind, const ConsumptionVector& x) {
  std::vector<double> out(sections.size(), 0.0);
  std::visit(overloaded{
                 [&](const scheme::Local&) {
                   for (std::size_t i = 0; i < sections.size(); ++i) out[i] = local_utility(kind, sections[i], x[i]);
                 },
                 [&](const scheme::Global&) { out.assign(sections.size(), global_utility(sections, x, kind)); },
                 [&](const scheme::Difference&) {
                   for (std::size_t i = 0; i < sections.size(); ++i) {
                     if (x[i] > 0) out[i] = difference_reward_resource(kind, sections[i], x[i]);
                   }
                 },
                 [&](const scheme::ResourceAbstraction& ra) {
                   for (std::size_t i = 0; i < sections.size(); ++i) {
                     out[i] = abstract_reward(kind, ra.grouping, sections, x, i);
                   }
                 },
                 [&](const scheme::PathAbstraction&) {
                   throw std::invalid_argument("path abstraction needs a road network scenario");
                 },
             },
             scheme);
  return out;
}

/// Reward for an agent on each path; unused paths get 0 under the difference scheme.
std::vector<double> path_rewards(const RewardScheme& scheme, const RoadNetwork& net, UtilityKind kind,
                                 const PathCounts& counts) {
  const auto n = net.paths().size();
  const auto loads = segment_loads(net, counts);
  std::vector<double> out(n, 0.0);
  std::visit(overloaded{
                 [&](const scheme::Local&) {
                   for (std::size_t p = 0; p < n; ++p) out[p] = path_local_reward(net, kind, loads, p);
                 },
                 [&](const scheme::Global&) { out.assign(n, global_utility(net.segments(), loads, kind)); },
                 [&](const scheme::Difference&) {
                   for (std::size_t p = 0; p < n; ++p) {
                     if (counts[p] > 0) out[p] = path_difference_reward(net, kind, loads, p);
                   }
                 },
                 [&](const scheme::ResourceAbstraction& ra) {
                   for (std::size_t p = 0; p < n; ++p) {
                     out[p] = abstract_reward_segment_path(net, kind, ra.grouping, counts, p);
                   }
                 },
                 [&](const scheme::PathAbstraction& ra) {
                   for (std::size_t p = 0; p < n; ++p) out[p] = abstract_reward_path(net, kind, ra.grouping, counts, p);
                 },
             },
             scheme);
  return out;
}

}  // namespace

void StripScenario::validate() const {
  if (sections.size() < 2) throw std::invalid_argument("a strip needs at least 2 sections");
  validate_resources(sections);
  if (agents < 0) throw std::invalid_argument("agent count must be >= 0");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
}

void NetworkScenario::validate() const {
  if (agents < 0) throw std::invalid_argument("agent count must be >= 0");
}

std::string scheme_tag(const RewardScheme& scheme) {
  return std::visit(overloaded{
                        [](const scheme::Local&) { return std::string("local"); },
                        [](const scheme::Global&) { return std::string("global"); },
                        [](const scheme::Difference&) { return std::string("difference"); },
                        [](const scheme::ResourceAbstraction&) { return std::string("ra_resources"); },
                        [](const scheme::PathAbstraction&) { return std::string("ra_paths"); },
                    },
                    scheme);
}

std::size_t apply_strip_action(std::size_t section, std::size_t action, std::size_t sections) {
  switch (action) {
    case MoveLeft:
      return section == 0 ? 0 : section - 1;
    case Stay:
      return section;
    case MoveRight:
      return section + 1 >= sections ? sections - 1 : section + 1;
    default:
      throw std::invalid_argument("unknown strip action " + std::to_string(action));
  }
}

void check_scheme(const RewardScheme& scheme, const StripScenario& scenario) {
  if (std::holds_alternative<scheme::PathAbstraction>(scheme)) {
    throw std::invalid_argument("path abstraction is only defined for road network scenarios");
  }
  if (const auto* ra = std::get_if<scheme::ResourceAbstraction>(&scheme)) {
    if (ra->grouping.universe() != scenario.sections.size()) {
      throw std::invalid_argument("resource grouping does not partition the strip's sections");
    }
  }
}

void check_scheme(const RewardScheme& scheme, const NetworkScenario& scenario) {
  if (const auto* ra = std::get_if<scheme::ResourceAbstraction>(&scheme)) {
    if (ra->grouping.universe() != scenario.network.segments().size()) {
      throw std::invalid_argument("segment grouping does not partition the network's segments");
    }
  }
  if (const auto* ra = std::get_if<scheme::PathAbstraction>(&scheme)) {
    if (ra->grouping.universe() != scenario.network.paths().size()) {
      throw std::invalid_argument("path grouping does not partition the network's paths");
    }
  }
}

std::vector<double> assign_rewards(const RewardScheme& scheme, const StripState& state) {
  if (state.consumption == nullptr) throw std::invalid_argument("strip state has no consumption");
  if (const auto* ra = std::get_if<scheme::ResourceAbstraction>(&scheme);
      ra != nullptr && ra->grouping.universe() != state.sections.size()) {
    throw std::invalid_argument("resource grouping does not partition the strip's sections");
  }
  const auto per_section = section_rewards(scheme, state.sections, state.kind, *state.consumption);
  std::vector<double> rewards;
  rewards.reserve(state.positions.size());
  for (auto s : state.positions) {
    if (s >= per_section.size()) throw std::invalid_argument("agent position outside the strip");
    rewards.push_back(per_section[s]);
  }
  return rewards;
}

std::vector<double> assign_rewards(const RewardScheme& scheme, const NetworkState& state) {
  if (state.network == nullptr || state.counts == nullptr) throw std::invalid_argument("incomplete network state");
  if (const auto* ra = std::get_if<scheme::ResourceAbstraction>(&scheme);
      ra != nullptr && ra->grouping.universe() != state.network->segments().size()) {
    throw std::invalid_argument("segment grouping does not partition the network's segments");
  }
  if (const auto* ra = std::get_if<scheme::PathAbstraction>(&scheme);
      ra != nullptr && ra->grouping.universe() != state.network->paths().size()) {
    throw std::invalid_argument("path grouping does not partition the network's paths");
  }
  const auto per_path = path_rewards(scheme, *state.network, state.kind, *state.counts);
  std::vector<double> rewards;
  rewards.reserve(state.choices.size());
  for (auto p : state.choices) {
    if (p >= per_path.size()) throw std::invalid_argument("agent chose an unknown path");
    rewards.push_back(per_path[p]);
  }
  return rewards;
}

std::vector<QLearner> make_learners(const StripScenario& scenario) {
  return std::vector<QLearner>(static_cast<std::size_t>(scenario.agents),
                               QLearner{QTable(scenario.sections.size(), kStripActions), Rng{}});
}

std::vector<QLearner> make_learners(const NetworkScenario& scenario) {
  return std::vector<QLearner>(static_cast<std::size_t>(scenario.agents),
                               QLearner{QTable(1, scenario.network.paths().size()), Rng{}});
}

StripEpisodeResult strip_episode(const StripScenario& scenario, std::span<QLearner> learners,
                                 const RewardScheme& scheme, const StepParams& params, Rng& env_rng,
                                 StripTrace* trace) {
  const auto n_agents = static_cast<std::size_t>(scenario.agents);
  const auto n_sections = scenario.sections.size();
  const auto horizon = static_cast<std::size_t>(scenario.horizon);
  if (learners.size() != n_agents) {
    throw std::invalid_argument("strip episode got " + std::to_string(learners.size()) + " learners for " +
                                std::to_string(n_agents) + " agents");
  }

  // states[t * n_agents + i] is agent i's section before step t; actions likewise.
  std::vector<std::size_t> states((horizon + 1) * n_agents);
  std::vector<std::size_t> actions(horizon * n_agents);
  std::uniform_int_distribution<std::size_t> pick_section(0, n_sections - 1);
  for (std::size_t i = 0; i < n_agents; ++i) {
    states[i] = scenario.placement == InitialPlacement::Uniform ? pick_section(env_rng) : 0;
  }
  if (trace) trace->assign(1, {states.begin(), states.begin() + static_cast<std::ptrdiff_t>(n_agents)});

  for (std::size_t t = 0; t < horizon; ++t) {
    const auto* now = &states[t * n_agents];
    auto* next = &states[(t + 1) * n_agents];
    for (std::size_t i = 0; i < n_agents; ++i) {
      const auto a = select_action(learners[i].table, now[i], params.epsilon, learners[i].rng);
      actions[t * n_agents + i] = a;
      next[i] = apply_strip_action(now[i], a, n_sections);
    }
    if (trace) trace->emplace_back(next, next + n_agents);
  }

  const std::span<const std::size_t> final_positions(&states[horizon * n_agents], n_agents);
  auto consumption = ConsumptionVector::zeros(n_sections);
  for (auto s : final_positions) ++consumption[s];

  StripEpisodeResult result;
  result.rewards = assign_rewards(scheme, StripState{scenario.sections, scenario.kind, &consumption, final_positions});
  result.global_utility = global_utility(scenario.sections, consumption, scenario.kind);
  result.consumption = std::move(consumption);

  for (std::size_t t = 0; t < horizon; ++t) {
    const bool terminal = t + 1 == horizon;
    for (std::size_t i = 0; i < n_agents; ++i) {
      q_update(learners[i].table, states[t * n_agents + i], actions[t * n_agents + i],
               terminal ? result.rewards[i] : 0.0, states[(t + 1) * n_agents + i], params.alpha, params.gamma,
               terminal);
    }
  }
  return result;
}

NetworkEpisodeResult network_episode(const NetworkScenario& scenario, std::span<QLearner> learners,
                                     const RewardScheme& scheme, const StepParams& params) {
  const auto n_agents = static_cast<std::size_t>(scenario.agents);
  if (learners.size() != n_agents) {
    throw std::invalid_argument("network episode got " + std::to_string(learners.size()) + " learners for " +
                                std::to_string(n_agents) + " agents");
  }
  const auto& net = scenario.network;
  std::vector<std::size_t> choices(n_agents);
  PathCounts counts(std::vector<int>(net.paths().size(), 0));
  for (std::size_t i = 0; i < n_agents; ++i) {
    choices[i] = select_action(learners[i].table, 0, params.epsilon, learners[i].rng);
    ++counts[choices[i]];
  }

  NetworkEpisodeResult result;
  result.rewards = assign_rewards(scheme, NetworkState{&net, scenario.kind, &counts, choices});
  result.global_utility = network_global_utility(net, scenario.kind, counts);
  for (std::size_t i = 0; i < n_agents; ++i) {
    q_update(learners[i].table, 0, choices[i], result.rewards[i], 0, params.alpha, params.gamma, true);
  }
  result.counts = std::move(counts);
  return result;
}

}  // namespace congestion
