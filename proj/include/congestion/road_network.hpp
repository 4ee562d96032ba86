#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "congestion/resource.hpp"

namespace congestion {

/// A directed road segment. The segment is a resource in its own right; a
/// segment shared by several paths contributes one utility term.
struct Segment {
  Resource resource;
  std::string from;
  std::string to;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct PathSpec {
  std::string id;
  std::vector<std::string> segments;

  friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

/// Admissible source-to-sink route. Capacity is the bottleneck capacity,
/// weight the mean segment weight.
struct Path {
  std::string id;
  std::vector<std::size_t> segments;
  int capacity = 1;
  double weight = 0.0;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Agents per path, indexed like RoadNetwork::paths().
struct PathCounts {
  std::vector<int> counts;

  PathCounts() = default;
  explicit PathCounts(std::vector<int> values) : counts(std::move(values)) {}

  std::size_t size() const { return counts.size(); }
  int operator[](std::size_t i) const { return counts[i]; }
  int& operator[](std::size_t i) { return counts[i]; }
  long total() const;

  friend bool operator==(const PathCounts&, const PathCounts&) = default;
};

class RoadNetwork {
 public:
  RoadNetwork(std::vector<std::string> nodes, std::vector<Segment> segments, std::string source,
              std::string sink, const std::vector<PathSpec>& paths);

  /// Four-node topology A->B, A->C, B->C, B->D, C->D with paths ABD, ACD,
  /// ABCD (in that order). Segments are ordered AB, AC, BC, BD, CD.
  static RoadNetwork bridge(int capacity, double weight = 1.0);
  static RoadNetwork bridge(std::span<const Resource> segments_ab_ac_bc_bd_cd);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& source() const { return source_; }
  const std::string& sink() const { return sink_; }
  /// Segment resources, in declaration order.
  std::span<const Resource> segments() const { return resources_; }
  const Segment& segment(std::size_t i) const { return segments_.at(i); }
  const std::vector<Path>& paths() const { return paths_; }
  const Path& path(std::size_t i) const { return paths_.at(i); }

  std::size_t segment_index(const std::string& id) const;
  std::size_t path_index(const std::string& id) const;
  std::vector<std::string> path_ids() const;
  std::vector<PathSpec> path_specs() const;

  friend bool operator==(const RoadNetwork&, const RoadNetwork&) = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<Segment> segments_;
  std::vector<Resource> resources_;
  std::string source_;
  std::string sink_;
  std::vector<Path> paths_;
};

/// Resource abstraction over whole paths.
class PathGrouping : public Partition {
 public:
  using Partition::Partition;
  explicit PathGrouping(Partition p) : Partition(std::move(p)) {}

  static PathGrouping from_ids(const std::vector<std::vector<std::string>>& groups,
                               const RoadNetwork& network);
  static PathGrouping singletons(std::size_t n) { return PathGrouping(Partition::singletons(n)); }
};

/// All simple source-to-sink paths as segment index lists (DFS order).
std::vector<std::vector<std::size_t>> enumerate_simple_paths(const RoadNetwork& network);

/// Induced segment load: each agent loads every segment of its path once.
ConsumptionVector segment_loads(const RoadNetwork& network, const PathCounts& counts);

/// Sum of segment local utilities along `path`.
double path_local_reward(const RoadNetwork& network, UtilityKind kind, const PathCounts& counts,
                         std::size_t path);
double path_local_reward(const RoadNetwork& network, UtilityKind kind,
                         const ConsumptionVector& loads, std::size_t path);

/// Sum of local utilities over segments, each counted once.
double network_global_utility(const RoadNetwork& network, UtilityKind kind, const PathCounts& counts);

/// L_path at the current loads minus L_path with every member segment
/// decremented by one (the agent removed). Needs counts[path] >= 1.
double path_difference_reward(const RoadNetwork& network, UtilityKind kind, const PathCounts& counts,
                              std::size_t path);
double path_difference_reward(const RoadNetwork& network, UtilityKind kind,
                              const ConsumptionVector& loads, std::size_t path);

/// Sum over the path's segments of their segment-level abstract reward.
double abstract_reward_segment_path(const RoadNetwork& network, UtilityKind kind,
                                    const AbstractGrouping& grouping, const PathCounts& counts,
                                    std::size_t path);

/// L_path when no segment of the path is congested, otherwise the negated
/// utility of the path group aggregate.
double abstract_reward_path(const RoadNetwork& network, UtilityKind kind, const PathGrouping& grouping,
                            const PathCounts& counts, std::size_t path);

bool is_path_congested(const RoadNetwork& network, const PathCounts& counts, std::size_t path);
bool is_path_congested(const RoadNetwork& network, const ConsumptionVector& loads, std::size_t path);

GroupAggregate path_group_aggregates(const RoadNetwork& network, const PathGrouping& grouping,
                                     std::size_t group, const PathCounts& counts);

}  // namespace congestion
