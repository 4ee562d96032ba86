#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace congestion {

/// Local utility family. BPD: x*exp(-x/c), unit weight. TLD: flat w/e up to
/// capacity, w*exp(-x/c) beyond it.
enum class UtilityKind { Bpd, Tld };

std::string_view to_string(UtilityKind kind);
UtilityKind parse_utility_kind(std::string_view text);

/// A congestible unit: beach section, traffic lane or road segment.
struct Resource {
  std::string id;
  double weight = 1.0;
  int capacity = 1;

  friend bool operator==(const Resource&, const Resource&) = default;
};

/// Throws std::invalid_argument on negative weight, capacity < 1 or
/// duplicated ids.
void validate_resources(std::span<const Resource> resources);

/// Per-resource agent counts, indexed like the resource list it belongs to.
struct ConsumptionVector {
  std::vector<int> counts;

  ConsumptionVector() = default;
  explicit ConsumptionVector(std::vector<int> values) : counts(std::move(values)) {}
  static ConsumptionVector zeros(std::size_t n) { return ConsumptionVector(std::vector<int>(n, 0)); }

  std::size_t size() const { return counts.size(); }
  int operator[](std::size_t i) const { return counts[i]; }
  int& operator[](std::size_t i) { return counts[i]; }
  long total() const;

  friend bool operator==(const ConsumptionVector&, const ConsumptionVector&) = default;
};

/// Disjoint, covering partition of the indices [0, universe) into non-empty
/// groups. Shared by resource groupings and path groupings.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<std::vector<std::size_t>> groups, std::size_t universe);

  /// Resolves id lists against `universe_ids`. `what` names the element kind
  /// in error messages ("resource", "path").
  static Partition from_ids(const std::vector<std::vector<std::string>>& groups,
                            std::span<const std::string> universe_ids, std::string_view what);

  /// Every element in its own group.
  static Partition singletons(std::size_t universe);

  std::size_t group_count() const { return groups_.size(); }
  std::size_t universe() const { return owner_.size(); }
  const std::vector<std::size_t>& group(std::size_t g) const { return groups_.at(g); }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }
  std::size_t group_of(std::size_t member) const { return owner_.at(member); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> owner_;
};

/// Resource abstraction groups over independent resources or road segments.
class AbstractGrouping : public Partition {
 public:
  using Partition::Partition;
  explicit AbstractGrouping(Partition p) : Partition(std::move(p)) {}

  static AbstractGrouping from_ids(const std::vector<std::vector<std::string>>& groups,
                                   std::span<const Resource> resources);
  static AbstractGrouping singletons(std::size_t n) { return AbstractGrouping(Partition::singletons(n)); }
};

/// Aggregate properties of an abstract group: summed consumption, summed
/// capacity, mean weight.
struct GroupAggregate {
  long consumption = 0;
  long capacity = 0;
  double weight = 0.0;
};

std::vector<std::string> resource_ids(std::span<const Resource> resources);

}  // namespace congestion
