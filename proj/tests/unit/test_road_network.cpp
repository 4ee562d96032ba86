#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "congestion/road_network.hpp"
#include "congestion/utility.hpp"
#include "oracles.hpp"

using namespace congestion;

namespace {

const std::array<oracle::Section, 5> kUniform5{{{5, 1}, {5, 1}, {5, 1}, {5, 1}, {5, 1}}};

PathCounts counts(int abd, int acd, int abcd) { return PathCounts({abd, acd, abcd}); }

}  // namespace

TEST_CASE("bridge topology") {
  const auto net = RoadNetwork::bridge(5);
  CHECK(net.segments().size() == 5);
  CHECK(net.path_ids() == std::vector<std::string>{"ABD", "ACD", "ABCD"});
  CHECK(net.segment(net.segment_index("BC")).from == "B");
  CHECK(net.path(2).segments == std::vector<std::size_t>{0, 2, 4});
  CHECK(net.path(2).capacity == 5);
  CHECK_THROWS_AS(net.segment_index("DA"), std::invalid_argument);
  CHECK_THROWS_AS(net.path_index("ADB"), std::invalid_argument);
}

TEST_CASE("path capacity is the bottleneck and weight the mean") {
  const std::vector<Resource> segs{{"AB", 1.0, 7}, {"AC", 5.0, 5}, {"BC", 4.0, 2}, {"BD", 5.0, 9}, {"CD", 1.0, 6}};
  const auto net = RoadNetwork::bridge(segs);
  CHECK(net.path(0).capacity == 7);
  CHECK(net.path(0).weight == 3.0);
  CHECK(net.path(2).capacity == 2);
  CHECK(net.path(2).weight == 2.0);
}

TEST_CASE("network validation") {
  const std::vector<std::string> nodes{"A", "B", "C"};
  const std::vector<Segment> segs{{{"AB", 1.0, 2}, "A", "B"}, {{"BC", 1.0, 2}, "B", "C"}, {{"AC", 1.0, 2}, "A", "C"}};
  CHECK_NOTHROW(RoadNetwork(nodes, segs, "A", "C", {{"P", {"AB", "BC"}}, {"Q", {"AC"}}}));
  // Not head-to-tail.
  CHECK_THROWS_AS(RoadNetwork(nodes, segs, "A", "C", {{"P", {"BC", "AB"}}}), std::invalid_argument);
  // Does not reach the sink.
  CHECK_THROWS_AS(RoadNetwork(nodes, segs, "A", "C", {{"P", {"AB"}}}), std::invalid_argument);
  // Unknown segment.
  CHECK_THROWS_AS(RoadNetwork(nodes, segs, "A", "C", {{"P", {"AX"}}}), std::invalid_argument);
  // No paths at all.
  CHECK_THROWS_AS(RoadNetwork(nodes, segs, "A", "C", {}), std::invalid_argument);
  // Undeclared endpoint.
  const std::vector<Segment> stray{{{"AZ", 1.0, 2}, "A", "Z"}, {{"AC", 1.0, 2}, "A", "C"}};
  CHECK_THROWS_AS(RoadNetwork(nodes, stray, "A", "C", {{"Q", {"AC"}}}), std::invalid_argument);
  // Repeated segment in a cycle.
  const std::vector<std::string> ring{"A", "B", "C"};
  const std::vector<Segment> loop{{{"AB", 1.0, 2}, "A", "B"}, {{"BA", 1.0, 2}, "B", "A"}, {{"AC", 1.0, 2}, "A", "C"}};
  CHECK_THROWS_AS(RoadNetwork(ring, loop, "A", "C", {{"P", {"AB", "BA", "AB", "BA", "AC"}}}), std::invalid_argument);
}

TEST_CASE("simple path enumeration on the bridge") {
  const auto net = RoadNetwork::bridge(5);
  auto found = enumerate_simple_paths(net);
  std::sort(found.begin(), found.end());
  std::vector<std::vector<std::size_t>> expected{{0, 2, 4}, {0, 3}, {1, 4}};
  CHECK(found == expected);
}

TEST_CASE("segment loads") {
  const auto net = RoadNetwork::bridge(5);
  CHECK(segment_loads(net, counts(4, 42, 4)) == ConsumptionVector({8, 42, 4, 4, 46}));
  CHECK(segment_loads(net, counts(0, 0, 0)) == ConsumptionVector::zeros(5));
  CHECK(segment_loads(net, counts(50, 0, 0)) == ConsumptionVector({50, 0, 0, 50, 0}));
  CHECK_THROWS_AS(segment_loads(net, PathCounts({1, 2})), std::invalid_argument);
}

TEST_CASE("path local reward") {
  const auto net = RoadNetwork::bridge(5);
  CHECK(path_local_reward(net, UtilityKind::Bpd, counts(4, 42, 4), 0) == doctest::Approx(3.412488000).epsilon(1e-9));
  CHECK(path_local_reward(net, UtilityKind::Bpd, counts(4, 42, 4), 2) == doctest::Approx(3.417135813).epsilon(1e-9));
  CHECK(path_local_reward(net, UtilityKind::Bpd, counts(0, 0, 0), 1) == 0.0);
  CHECK(path_local_reward(net, UtilityKind::Bpd, counts(1, 0, 0), 0) == doctest::Approx(1.6374615062).epsilon(1e-9));
}

TEST_CASE("network global utility") {
  const auto net = RoadNetwork::bridge(5);
  CHECK(network_global_utility(net, UtilityKind::Bpd, counts(4, 42, 4)) == doctest::Approx(5.22).epsilon(0.01 / 5.22));
  CHECK(network_global_utility(net, UtilityKind::Bpd, counts(4, 42, 4)) == doctest::Approx(5.223896097).epsilon(1e-9));
  CHECK(network_global_utility(net, UtilityKind::Bpd, counts(0, 0, 0)) == 0.0);
  CHECK(network_global_utility(net, UtilityKind::Bpd, counts(5, 45, 0)) == doctest::Approx(3.6899012941).epsilon(1e-9));
}

TEST_CASE("path difference reward") {
  const auto net = RoadNetwork::bridge(5);
  const auto g = [&](int a, int b, int c) { return network_global_utility(net, UtilityKind::Bpd, counts(a, b, c)); };
  CHECK(path_difference_reward(net, UtilityKind::Bpd, counts(4, 42, 4), 1) == doctest::Approx(g(4, 42, 4) - g(4, 41, 4)).epsilon(1e-12));
  CHECK(path_difference_reward(net, UtilityKind::Bpd, counts(4, 42, 4), 2) == doctest::Approx(g(4, 42, 4) - g(4, 42, 3)).epsilon(1e-12));
  // Alone on the network, the marginal contribution is the path's own reward.
  CHECK(path_difference_reward(net, UtilityKind::Bpd, counts(0, 1, 0), 1) ==
        path_local_reward(net, UtilityKind::Bpd, counts(0, 1, 0), 1));
  CHECK_THROWS_AS(path_difference_reward(net, UtilityKind::Bpd, counts(0, 3, 3), 0), std::invalid_argument);
}

TEST_CASE("segment abstraction along a path") {
  const auto net = RoadNetwork::bridge(5);
  const auto best = AbstractGrouping::from_ids({{"AB"}, {"AC"}, {"CD"}, {"BC", "BD"}}, net.segments());
  const auto c = counts(4, 42, 4);
  // ACD: AC congested (singleton penalty), CD congested (singleton penalty).
  const double expected = -oracle::bpd(42, 5) - oracle::bpd(46, 5);
  CHECK(abstract_reward_segment_path(net, UtilityKind::Bpd, best, c, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(-oracle::bpd(42, 5) == doctest::Approx(-0.0094444276).epsilon(1e-8));
  // No congestion anywhere: same as the path-local reward.
  const auto light = counts(1, 2, 1);
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(abstract_reward_segment_path(net, UtilityKind::Bpd, best, light, p) == path_local_reward(net, UtilityKind::Bpd, light, p));
  }
  // Singleton segment grouping with one segment at c + 1.
  const auto singles = AbstractGrouping::singletons(5);
  const double only_ac = abstract_reward_segment_path(net, UtilityKind::Bpd, singles, counts(0, 6, 0), 1);
  CHECK(only_ac == doctest::Approx(-2 * 6 * std::exp(-6.0 / 5)).epsilon(1e-12));
}

TEST_CASE("path abstraction") {
  const auto net = RoadNetwork::bridge(5);
  const auto grouping = PathGrouping::from_ids({{"ABD", "ACD"}, {"ABCD"}}, net);
  CHECK(abstract_reward_path(net, UtilityKind::Bpd, grouping, counts(5, 5, 40), 2) ==
        doctest::Approx(-40 * std::exp(-8.0)).epsilon(1e-12));
  CHECK(-40 * std::exp(-8.0) == doctest::Approx(-0.0134185051).epsilon(1e-8));
  // ABD is congested through the shared segment AB: group {ABD, ACD} holds
  // 10 agents over summed capacity 10.
  CHECK(abstract_reward_path(net, UtilityKind::Bpd, grouping, counts(5, 5, 40), 0) ==
        doctest::Approx(-oracle::bpd(10, 10)).epsilon(1e-12));
  const auto light = counts(2, 1, 2);
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(abstract_reward_path(net, UtilityKind::Bpd, grouping, light, p) == path_local_reward(net, UtilityKind::Bpd, light, p));
  }
  const auto agg = path_group_aggregates(net, grouping, 0, counts(5, 5, 40));
  CHECK(agg.consumption == 10);
  CHECK(agg.capacity == 10);
  CHECK(agg.weight == 1.0);
  CHECK_THROWS_AS(PathGrouping::from_ids({{"ABD", "ACD"}, {"ACD", "ABCD"}}, net), std::invalid_argument);
  CHECK_THROWS_AS(PathGrouping::from_ids({{"ABD"}, {"ABCD"}}, net), std::invalid_argument);
}

TEST_CASE("path congestion") {
  const auto net = RoadNetwork::bridge(5);
  for (std::size_t p = 0; p < 3; ++p) CHECK_FALSE(is_path_congested(net, counts(0, 0, 0), p));
  CHECK(is_path_congested(net, counts(0, 0, 6), 0));
  CHECK(is_path_congested(net, counts(0, 0, 6), 1));
  for (std::size_t p = 0; p < 3; ++p) CHECK_FALSE(is_path_congested(net, counts(5, 5, 0), p));
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: path difference reward equals the change in network G") {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool is_tld = gen.coin();
    std::vector<Resource> segs;
    std::array<oracle::Section, 5> ref{};
    const char* ids[] = {"AB", "AC", "BC", "BD", "CD"};
    for (std::size_t s = 0; s < 5; ++s) {
      const int c = gen.integer(1, 10);
      const double w = is_tld ? gen.real(0.0, 8.0) : 1.0;
      segs.push_back({ids[s], w, c});
      ref[s] = {static_cast<double>(c), w};
    }
    const auto net = RoadNetwork::bridge(segs);
    std::array<int, 3> n{gen.integer(0, 30), gen.integer(0, 30), gen.integer(0, 30)};
    const auto p = static_cast<std::size_t>(gen.integer(0, 2));
    if (n[p] == 0) n[p] = 1;
    const auto kind = is_tld ? UtilityKind::Tld : UtilityKind::Bpd;
    const PathCounts pc({n[0], n[1], n[2]});
    const double d = path_difference_reward(net, kind, pc, p);
    CHECK(std::abs(d - oracle::bridge_marginal(is_tld, ref, n, p)) <= 1e-12);
    auto less = pc;
    --less[p];
    CHECK(std::abs(d - (network_global_utility(net, kind, pc) - network_global_utility(net, kind, less))) <= 1e-12);
  }
}

TEST_CASE("property: load conservation") {
  oracle::Gen gen(22);
  const auto net = RoadNetwork::bridge(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const PathCounts pc({gen.integer(0, 60), gen.integer(0, 60), gen.integer(0, 60)});
    const auto loads = segment_loads(net, pc);
    long weighted = 0;
    for (std::size_t p = 0; p < 3; ++p) weighted += static_cast<long>(pc[p]) * static_cast<long>(net.path(p).segments.size());
    CHECK(loads.total() == weighted);
    const auto expected = oracle::bridge_loads({pc[0], pc[1], pc[2]});
    for (std::size_t s = 0; s < 5; ++s) CHECK(loads[s] == expected[s]);
  }
}

TEST_CASE("property: shared segments are counted once") {
  oracle::Gen gen(23);
  const auto net = RoadNetwork::bridge(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const PathCounts pc({gen.integer(0, 40), gen.integer(0, 40), gen.integer(0, 40)});
    const auto loads = segment_loads(net, pc);
    const double g = network_global_utility(net, UtilityKind::Bpd, pc);
    CHECK(g == doctest::Approx(oracle::bridge_g(false, kUniform5, {pc[0], pc[1], pc[2]})).epsilon(1e-12));
    double path_sum = 0.0;
    for (std::size_t p = 0; p < 3; ++p) path_sum += path_local_reward(net, UtilityKind::Bpd, pc, p);
    if (loads[0] > 0 || loads[4] > 0) CHECK(g != path_sum);
  }
}

TEST_CASE("property: abstractions reduce to local rewards without congestion") {
  oracle::Gen gen(24);
  const auto net = RoadNetwork::bridge(9);
  const auto seg_groupings = std::vector<AbstractGrouping>{
      AbstractGrouping::singletons(5), AbstractGrouping({{0, 1, 2, 3, 4}}, 5), AbstractGrouping({{0, 3}, {1, 4}, {2}}, 5)};
  const auto path_groupings = std::vector<PathGrouping>{PathGrouping(Partition::singletons(3)), PathGrouping({{0, 1}, {2}}, 3),
                                                        PathGrouping({{0, 1, 2}}, 3)};
  for (int trial = 0; trial < 500; ++trial) {
    // Loads stay at or below 9 when each path carries at most 3 agents.
    const PathCounts pc({gen.integer(0, 3), gen.integer(0, 3), gen.integer(0, 3)});
    const auto kind = gen.coin() ? UtilityKind::Tld : UtilityKind::Bpd;
    for (std::size_t p = 0; p < 3; ++p) {
      const double local = path_local_reward(net, kind, pc, p);
      for (const auto& g : seg_groupings) CHECK(abstract_reward_segment_path(net, kind, g, pc, p) == local);
      for (const auto& g : path_groupings) CHECK(abstract_reward_path(net, kind, g, pc, p) == local);
    }
  }
}
