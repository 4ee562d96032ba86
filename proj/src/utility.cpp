#include "congestion/utility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace congestion {

namespace {

double bpd_form(double x, double capacity) { return x * std::exp(-x / capacity); }

double tld_form(double x, double capacity, double weight) {
  return x <= capacity ? weight * std::exp(-1.0) : weight * std::exp(-x / capacity);
}

void check_consumption(std::span<const Resource> resources, const ConsumptionVector& consumption) {
  if (consumption.size() != resources.size()) {
    throw std::invalid_argument("consumption has " + std::to_string(consumption.size()) +
                                " entries for " + std::to_string(resources.size()) + " resources");
  }
  for (std::size_t i = 0; i < consumption.size(); ++i) {
    if (consumption[i] < 0) {
      throw std::invalid_argument("negative consumption on resource '" + resources[i].id + "'");
    }
  }
}

}  // namespace

double local_utility(UtilityKind kind, double weight, int capacity, int x) {
  if (x < 0) throw std::invalid_argument("consumption must be >= 0");
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  if (!(weight >= 0.0)) throw std::invalid_argument("weight must be >= 0");
  switch (kind) {
    case UtilityKind::Bpd:
      return bpd_form(x, capacity);
    case UtilityKind::Tld:
      return tld_form(x, capacity, weight);
  }
  throw std::invalid_argument("unknown utility kind");
}

double aggregate_utility(UtilityKind kind, const GroupAggregate& agg) {
  if (agg.consumption < 0 || agg.capacity < 1) throw std::invalid_argument("invalid group aggregate");
  const auto x = static_cast<double>(agg.consumption);
  const auto c = static_cast<double>(agg.capacity);
  return kind == UtilityKind::Bpd ? bpd_form(x, c) : tld_form(x, c, agg.weight);
}

double global_utility(std::span<const Resource> resources, const ConsumptionVector& consumption,
                      UtilityKind kind) {
  check_consumption(resources, consumption);
  double total = 0.0;
  for (std::size_t i = 0; i < resources.size(); ++i) {
    total += local_utility(kind, resources[i], consumption[i]);
  }
  return total;
}

double difference_reward_resource(UtilityKind kind, const Resource& resource, int x) {
  if (x < 1) throw std::invalid_argument("difference reward needs an agent on the resource (x >= 1)");
  return local_utility(kind, resource, x) - local_utility(kind, resource, x - 1);
}

GroupAggregate group_aggregates(const AbstractGrouping& grouping, std::size_t group,
                                std::span<const Resource> resources,
                                const ConsumptionVector& consumption) {
  if (grouping.universe() != resources.size()) {
    throw std::invalid_argument("grouping covers " + std::to_string(grouping.universe()) +
                                " resources, scenario has " + std::to_string(resources.size()));
  }
  if (group >= grouping.group_count()) {
    throw std::invalid_argument("group index " + std::to_string(group) + " out of range");
  }
  check_consumption(resources, consumption);
  GroupAggregate agg;
  const auto& members = grouping.group(group);
  double weight_sum = 0.0;
  for (auto m : members) {
    agg.consumption += consumption[m];
    agg.capacity += resources[m].capacity;
    weight_sum += resources[m].weight;
  }
  agg.weight = weight_sum / static_cast<double>(members.size());
  return agg;
}

double abstract_reward(UtilityKind kind, const AbstractGrouping& grouping,
                       std::span<const Resource> resources, const ConsumptionVector& consumption,
                       std::size_t resource) {
  if (resource >= resources.size() || resource >= grouping.universe()) {
    throw std::invalid_argument("resource index " + std::to_string(resource) + " not in grouping");
  }
  check_consumption(resources, consumption);
  const auto& r = resources[resource];
  const int x = consumption[resource];
  if (x <= r.capacity) return local_utility(kind, r, x);
  const auto agg = group_aggregates(grouping, grouping.group_of(resource), resources, consumption);
  return -aggregate_utility(kind, agg);
}

std::vector<CurvePoint> abstract_reward_curve(UtilityKind kind, const AbstractGrouping& grouping,
                                              std::span<const Resource> resources,
                                              std::size_t target_group, int max_agents) {
  validate_resources(resources);
  if (grouping.universe() != resources.size()) {
    throw std::invalid_argument("grouping does not match the resource list");
  }
  if (target_group >= grouping.group_count()) {
    throw std::invalid_argument("group index " + std::to_string(target_group) + " out of range");
  }
  long total_capacity = 0;
  for (const auto& r : resources) total_capacity += r.capacity;
  if (max_agents < total_capacity) {
    throw std::invalid_argument("max agents (" + std::to_string(max_agents) +
                                ") must be >= total capacity (" + std::to_string(total_capacity) + ")");
  }

  const std::size_t designated = grouping.group(target_group).front();
  auto counts = ConsumptionVector::zeros(resources.size());
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(max_agents));
  std::size_t cursor = 0;
  for (int agent = 1; agent <= max_agents; ++agent) {
    if (agent <= total_capacity) {
      // Round-robin over resources that still have room.
      while (counts[cursor] >= resources[cursor].capacity) cursor = (cursor + 1) % resources.size();
      ++counts[cursor];
      cursor = (cursor + 1) % resources.size();
    } else {
      ++counts[designated];
    }
    curve.push_back({agent, abstract_reward(kind, grouping, resources, counts, designated)});
  }
  return curve;
}

}  // namespace congestion
