#include "congestion/road_network.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "congestion/utility.hpp"

namespace congestion {

long PathCounts::total() const { return std::accumulate(counts.begin(), counts.end(), 0L); }

RoadNetwork::RoadNetwork(std::vector<std::string> nodes, std::vector<Segment> segments,
                         std::string source, std::string sink, const std::vector<PathSpec>& paths)
    : nodes_(std::move(nodes)), segments_(std::move(segments)), source_(std::move(source)),
      sink_(std::move(sink)) {
  std::unordered_set<std::string> node_set;
  for (const auto& n : nodes_) {
    if (!node_set.insert(n).second) throw std::invalid_argument("duplicate node '" + n + "'");
  }
  if (!node_set.contains(source_)) throw std::invalid_argument("source '" + source_ + "' is not a declared node");
  if (!node_set.contains(sink_)) throw std::invalid_argument("sink '" + sink_ + "' is not a declared node");

  resources_.reserve(segments_.size());
  for (const auto& s : segments_) {
    if (!node_set.contains(s.from) || !node_set.contains(s.to)) {
      throw std::invalid_argument("segment '" + s.resource.id + "' has an undeclared endpoint");
    }
    resources_.push_back(s.resource);
  }
  validate_resources(resources_);

  if (paths.empty()) throw std::invalid_argument("network needs at least one path");
  std::unordered_set<std::string> path_ids;
  for (const auto& spec : paths) {
    if (!path_ids.insert(spec.id).second) throw std::invalid_argument("duplicate path id '" + spec.id + "'");
    if (spec.segments.empty()) throw std::invalid_argument("path '" + spec.id + "' has no segments");
    Path p{spec.id, {}, 0, 0.0};
    std::string at = source_;
    std::unordered_set<std::size_t> used;
    int cap = 0;
    double weight_sum = 0.0;
    for (const auto& seg_id : spec.segments) {
      const auto idx = segment_index(seg_id);
      const auto& seg = segments_[idx];
      if (seg.from != at) {
        throw std::invalid_argument("path '" + spec.id + "': segment '" + seg_id + "' does not start at '" + at + "'");
      }
      if (!used.insert(idx).second) {
        throw std::invalid_argument("path '" + spec.id + "' repeats segment '" + seg_id + "'");
      }
      at = seg.to;
      cap = p.segments.empty() ? seg.resource.capacity : std::min(cap, seg.resource.capacity);
      weight_sum += seg.resource.weight;
      p.segments.push_back(idx);
    }
    if (at != sink_) throw std::invalid_argument("path '" + spec.id + "' does not end at sink '" + sink_ + "'");
    p.capacity = cap;
    p.weight = weight_sum / static_cast<double>(p.segments.size());
    paths_.push_back(std::move(p));
  }
}

RoadNetwork RoadNetwork::bridge(int capacity, double weight) {
  std::array<Resource, 5> segs{{{"AB", weight, capacity},
                                {"AC", weight, capacity},
                                {"BC", weight, capacity},
                                {"BD", weight, capacity},
                                {"CD", weight, capacity}}};
  return bridge(segs);
}

RoadNetwork RoadNetwork::bridge(std::span<const Resource> s) {
  if (s.size() != 5) throw std::invalid_argument("bridge network needs exactly 5 segments");
  std::vector<Segment> segments{{s[0], "A", "B"}, {s[1], "A", "C"}, {s[2], "B", "C"},
                                {s[3], "B", "D"}, {s[4], "C", "D"}};
  std::vector<PathSpec> paths{{"ABD", {s[0].id, s[3].id}},
                              {"ACD", {s[1].id, s[4].id}},
                              {"ABCD", {s[0].id, s[2].id, s[4].id}}};
  return RoadNetwork({"A", "B", "C", "D"}, std::move(segments), "A", "D", paths);
}

std::size_t RoadNetwork::segment_index(const std::string& id) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].resource.id == id) return i;
  }
  throw std::invalid_argument("unknown segment '" + id + "'");
}

std::size_t RoadNetwork::path_index(const std::string& id) const {
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (paths_[i].id == id) return i;
  }
  throw std::invalid_argument("unknown path '" + id + "'");
}

std::vector<std::string> RoadNetwork::path_ids() const {
  std::vector<std::string> ids;
  for (const auto& p : paths_) ids.push_back(p.id);
  return ids;
}

std::vector<PathSpec> RoadNetwork::path_specs() const {
  std::vector<PathSpec> specs;
  for (const auto& p : paths_) {
    PathSpec spec{p.id, {}};
    for (auto s : p.segments) spec.segments.push_back(segments_[s].resource.id);
    specs.push_back(std::move(spec));
  }
  return specs;
}

PathGrouping PathGrouping::from_ids(const std::vector<std::vector<std::string>>& groups,
                                    const RoadNetwork& network) {
  const auto ids = network.path_ids();
  return PathGrouping(Partition::from_ids(groups, ids, "path"));
}

std::vector<std::vector<std::size_t>> enumerate_simple_paths(const RoadNetwork& network) {
  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> stack;
  std::unordered_set<std::string> visited{network.source()};
  const auto n_segments = network.segments().size();

  std::function<void(const std::string&)> walk = [&](const std::string& at) {
    if (at == network.sink()) {
      found.push_back(stack);
      return;
    }
    for (std::size_t i = 0; i < n_segments; ++i) {
      const auto& seg = network.segment(i);
      if (seg.from != at || visited.contains(seg.to)) continue;
      visited.insert(seg.to);
      stack.push_back(i);
      walk(seg.to);
      stack.pop_back();
      visited.erase(seg.to);
    }
  };
  walk(network.source());
  return found;
}

namespace {

void check_counts(const RoadNetwork& network, const PathCounts& counts) {
  if (counts.size() != network.paths().size()) {
    throw std::invalid_argument("path counts have " + std::to_string(counts.size()) + " entries for " +
                                std::to_string(network.paths().size()) + " paths");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw std::invalid_argument("negative count on path '" + network.path(i).id + "'");
  }
}

void check_path(const RoadNetwork& network, std::size_t path) {
  if (path >= network.paths().size()) {
    throw std::invalid_argument("path index " + std::to_string(path) + " not in network");
  }
}

void check_loads(const RoadNetwork& network, const ConsumptionVector& loads) {
  if (loads.size() != network.segments().size()) {
    throw std::invalid_argument("segment loads do not match the network");
  }
}

}  // namespace

ConsumptionVector segment_loads(const RoadNetwork& network, const PathCounts& counts) {
  check_counts(network, counts);
  auto loads = ConsumptionVector::zeros(network.segments().size());
  for (std::size_t p = 0; p < counts.size(); ++p) {
    for (auto s : network.path(p).segments) loads[s] += counts[p];
  }
  return loads;
}

double path_local_reward(const RoadNetwork& network, UtilityKind kind, const ConsumptionVector& loads,
                         std::size_t path) {
  check_path(network, path);
  check_loads(network, loads);
  const auto segs = network.segments();
  double total = 0.0;
  for (auto s : network.path(path).segments) total += local_utility(kind, segs[s], loads[s]);
  return total;
}

double path_local_reward(const RoadNetwork& network, UtilityKind kind, const PathCounts& counts,
                         std::size_t path) {
  return path_local_reward(network, kind, segment_loads(network, counts), path);
}

double network_global_utility(const RoadNetwork& network, UtilityKind kind, const PathCounts& counts) {
  return global_utility(network.segments(), segment_loads(network, counts), kind);
}

double path_difference_reward(const RoadNetwork& network, UtilityKind kind,
                              const ConsumptionVector& loads, std::size_t path) {
  check_path(network, path);
  check_loads(network, loads);
  const auto segs = network.segments();
  double with = 0.0;
  double without = 0.0;
  for (auto s : network.path(path).segments) {
    if (loads[s] < 1) {
      throw std::invalid_argument("path '" + network.path(path).id + "' carries no agent to remove");
    }
    with += local_utility(kind, segs[s], loads[s]);
    without += local_utility(kind, segs[s], loads[s] - 1);
  }
  return with - without;
}

double path_difference_reward(const RoadNetwork& network, UtilityKind kind, const PathCounts& counts,
                              std::size_t path) {
  check_path(network, path);
  check_counts(network, counts);
  if (counts[path] < 1) {
    throw std::invalid_argument("path '" + network.path(path).id + "' has no agent (count 0)");
  }
  return path_difference_reward(network, kind, segment_loads(network, counts), path);
}

double abstract_reward_segment_path(const RoadNetwork& network, UtilityKind kind,
                                    const AbstractGrouping& grouping, const PathCounts& counts,
                                    std::size_t path) {
  check_path(network, path);
  if (grouping.universe() != network.segments().size()) {
    throw std::invalid_argument("segment grouping does not partition the network's segments");
  }
  const auto loads = segment_loads(network, counts);
  double total = 0.0;
  for (auto s : network.path(path).segments) {
    total += abstract_reward(kind, grouping, network.segments(), loads, s);
  }
  return total;
}

bool is_path_congested(const RoadNetwork& network, const ConsumptionVector& loads, std::size_t path) {
  check_path(network, path);
  check_loads(network, loads);
  const auto segs = network.segments();
  const auto& members = network.path(path).segments;
  return std::any_of(members.begin(), members.end(),
                     [&](std::size_t s) { return loads[s] > segs[s].capacity; });
}

bool is_path_congested(const RoadNetwork& network, const PathCounts& counts, std::size_t path) {
  return is_path_congested(network, segment_loads(network, counts), path);
}

GroupAggregate path_group_aggregates(const RoadNetwork& network, const PathGrouping& grouping,
                                     std::size_t group, const PathCounts& counts) {
  check_counts(network, counts);
  if (grouping.universe() != network.paths().size()) {
    throw std::invalid_argument("path grouping does not partition the network's paths");
  }
  if (group >= grouping.group_count()) throw std::invalid_argument("path group index out of range");
  GroupAggregate agg;
  double weight_sum = 0.0;
  for (auto p : grouping.group(group)) {
    agg.consumption += counts[p];
    agg.capacity += network.path(p).capacity;
    weight_sum += network.path(p).weight;
  }
  agg.weight = weight_sum / static_cast<double>(grouping.group(group).size());
  return agg;
}

double abstract_reward_path(const RoadNetwork& network, UtilityKind kind, const PathGrouping& grouping,
                            const PathCounts& counts, std::size_t path) {
  check_path(network, path);
  if (grouping.universe() != network.paths().size()) {
    throw std::invalid_argument("path grouping does not partition the network's paths");
  }
  const auto loads = segment_loads(network, counts);
  if (!is_path_congested(network, loads, path)) return path_local_reward(network, kind, loads, path);
  return -aggregate_utility(kind, path_group_aggregates(network, grouping, grouping.group_of(path), counts));
}

}  // namespace congestion
