#include "congestion/resource.hpp"

#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace congestion {

std::string_view to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::Bpd:
      return "bpd";
    case UtilityKind::Tld:
      return "tld";
  }
  return "?";
}

UtilityKind parse_utility_kind(std::string_view text) {
  if (text == "bpd" || text == "BPD") return UtilityKind::Bpd;
  if (text == "tld" || text == "TLD") return UtilityKind::Tld;
  throw std::invalid_argument("unknown utility kind '" + std::string(text) + "' (expected bpd or tld)");
}

void validate_resources(std::span<const Resource> resources) {
  std::unordered_set<std::string> seen;
  for (const auto& r : resources) {
    if (!(r.weight >= 0.0)) {
      throw std::invalid_argument("resource '" + r.id + "' has negative weight");
    }
    if (r.capacity < 1) {
      throw std::invalid_argument("resource '" + r.id + "' has capacity < 1");
    }
    if (!seen.insert(r.id).second) {
      throw std::invalid_argument("duplicate resource id '" + r.id + "'");
    }
  }
}

long ConsumptionVector::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

Partition::Partition(std::vector<std::vector<std::size_t>> groups, std::size_t universe)
    : groups_(std::move(groups)) {
  constexpr auto unassigned = static_cast<std::size_t>(-1);
  owner_.assign(universe, unassigned);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].empty()) {
      throw std::invalid_argument("group " + std::to_string(g) + " is empty");
    }
    for (auto m : groups_[g]) {
      if (m >= universe) {
        throw std::invalid_argument("group member " + std::to_string(m) + " is out of range");
      }
      if (owner_[m] != unassigned) {
        throw std::invalid_argument("element " + std::to_string(m) + " appears in more than one group");
      }
      owner_[m] = g;
    }
  }
  for (std::size_t m = 0; m < universe; ++m) {
    if (owner_[m] == unassigned) {
      throw std::invalid_argument("element " + std::to_string(m) + " is not covered by any group");
    }
  }
}

Partition Partition::from_ids(const std::vector<std::vector<std::string>>& groups,
                              std::span<const std::string> universe_ids, std::string_view what) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < universe_ids.size(); ++i) index.emplace(universe_ids[i], i);

  const std::string kind(what);
  std::vector<std::vector<std::size_t>> resolved;
  std::unordered_map<std::string, std::size_t> seen_in;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw std::invalid_argument("group " + std::to_string(g) + " is empty");
    auto& out = resolved.emplace_back();
    for (const auto& id : groups[g]) {
      auto it = index.find(id);
      if (it == index.end()) throw std::invalid_argument("unknown " + kind + " '" + id + "' in group " + std::to_string(g));
      if (auto [pos, fresh] = seen_in.emplace(id, g); !fresh) {
        throw std::invalid_argument(kind + " '" + id + "' appears in more than one group (groups " +
                                    std::to_string(pos->second) + " and " + std::to_string(g) + ")");
      }
      out.push_back(it->second);
    }
  }
  for (const auto& id : universe_ids) {
    if (!seen_in.contains(id)) throw std::invalid_argument(kind + " '" + id + "' is not in any group");
  }
  return Partition(std::move(resolved), universe_ids.size());
}

Partition Partition::singletons(std::size_t universe) {
  std::vector<std::vector<std::size_t>> groups(universe);
  for (std::size_t i = 0; i < universe; ++i) groups[i] = {i};
  return Partition(std::move(groups), universe);
}

std::vector<std::string> resource_ids(std::span<const Resource> resources) {
  std::vector<std::string> ids;
  ids.reserve(resources.size());
  for (const auto& r : resources) ids.push_back(r.id);
  return ids;
}

AbstractGrouping AbstractGrouping::from_ids(const std::vector<std::vector<std::string>>& groups,
                                            std::span<const Resource> resources) {
  const auto ids = resource_ids(resources);
  return AbstractGrouping(Partition::from_ids(groups, ids, "resource"));
}

}  // namespace congestion
