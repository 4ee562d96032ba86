#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "congestion/resource.hpp"

namespace congestion {

/// Utility of one resource holding `x` agents. BPD ignores `weight`.
double local_utility(UtilityKind kind, double weight, int capacity, int x);

inline double local_utility(UtilityKind kind, const Resource& r, int x) {
  return local_utility(kind, r.weight, r.capacity, x);
}

/// The local utility form evaluated on a group aggregate, f(X_b, C_b, W_b).
double aggregate_utility(UtilityKind kind, const GroupAggregate& agg);

/// Sum of local utilities over every resource.
double global_utility(std::span<const Resource> resources, const ConsumptionVector& consumption,
                      UtilityKind kind);

/// Marginal contribution of one agent on a resource holding `x >= 1` agents:
/// L(x) - L(x - 1). Every other term of the global sum cancels.
double difference_reward_resource(UtilityKind kind, const Resource& resource, int x);

GroupAggregate group_aggregates(const AbstractGrouping& grouping, std::size_t group,
                                std::span<const Resource> resources,
                                const ConsumptionVector& consumption);

/// Local utility while the resource is at or below capacity, otherwise the
/// negated utility of its whole abstract group.
double abstract_reward(UtilityKind kind, const AbstractGrouping& grouping,
                       std::span<const Resource> resources, const ConsumptionVector& consumption,
                       std::size_t resource);

struct CurvePoint {
  int agents = 0;
  double reward = 0.0;
};

/// Reward seen on the first resource of `target_group` while agents are added
/// one at a time: round-robin fill (resource order) up to total capacity, then
/// every further agent on that resource. One point per agent count 1..max_agents.
std::vector<CurvePoint> abstract_reward_curve(UtilityKind kind, const AbstractGrouping& grouping,
                                              std::span<const Resource> resources,
                                              std::size_t target_group, int max_agents);

}  // namespace congestion
