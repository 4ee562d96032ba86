#include "congestion/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <tuple>

#include "congestion/utility.hpp"

namespace congestion {

namespace {

int scenario_agents(const Scenario& scenario) {
  return std::visit([](const auto& s) { return s.agents; }, scenario);
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

void seed_learners(std::vector<QLearner>& learners, std::uint64_t seed) {
  for (std::size_t i = 0; i < learners.size(); ++i) learners[i].rng = make_stream(seed, i + 1);
}

}  // namespace

void ExperimentConfig::validate() const {
  std::visit([](const auto& s) { s.validate(); }, scenario);
  std::visit([&](const auto& s) { check_scheme(scheme, s); }, scenario);
  learner.validate();
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (report_interval < 1) throw std::invalid_argument("report_interval must be >= 1");
  if (episodes < report_interval) throw std::invalid_argument("episodes must be >= report_interval");
  if (smoothing_window < 0) throw std::invalid_argument("smoothing_window must be >= 0");
}

std::vector<std::string> entity_ids(const Scenario& scenario) {
  if (const auto* strip = std::get_if<StripScenario>(&scenario)) return resource_ids(strip->sections);
  return std::get<NetworkScenario>(scenario).network.path_ids();
}

std::vector<int> MetricsSeries::checkpoints() const {
  std::vector<int> out;
  for (int e = report_interval; e <= episodes; e += report_interval) out.push_back(e);
  return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  return base_seed + static_cast<std::uint64_t>(trial);
}

TrialResult run_trial(const ExperimentConfig& config, int trial) {
  const auto seed = trial_seed(config.base_seed, trial);
  TrialResult out;
  out.global_utility.reserve(static_cast<std::size_t>(config.episodes));

  if (const auto* strip = std::get_if<StripScenario>(&config.scenario)) {
    auto learners = make_learners(*strip);
    seed_learners(learners, seed);
    Rng env = make_stream(seed, 0);
    StripEpisodeResult last;
    for (int e = 0; e < config.episodes; ++e) {
      const auto p = decay(config.learner, e);
      last = strip_episode(*strip, learners, config.scheme, {p.alpha, p.epsilon, config.learner.gamma}, env);
      out.global_utility.push_back(last.global_utility);
    }
    out.final_occupancy = last.consumption.counts;
  } else {
    const auto& net = std::get<NetworkScenario>(config.scenario);
    auto learners = make_learners(net);
    seed_learners(learners, seed);
    NetworkEpisodeResult last;
    for (int e = 0; e < config.episodes; ++e) {
      const auto p = decay(config.learner, e);
      last = network_episode(net, learners, config.scheme, {p.alpha, p.epsilon, config.learner.gamma});
      out.global_utility.push_back(last.global_utility);
    }
    out.final_occupancy = last.counts.counts;
  }
  return out;
}

std::pair<double, double> mean_and_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (auto v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (auto v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

MetricsSeries run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (scenario_agents(config.scenario) < 1) throw std::invalid_argument("a learning run needs at least one agent");
  const auto n_trials = static_cast<std::size_t>(config.trials);
  std::vector<TrialResult> results(n_trials);
  std::vector<std::exception_ptr> errors(n_trials);

  unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_trials));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (auto t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1)) {
      try {
        results[t] = run_trial(config, static_cast<int>(t));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MetricsSeries series;
  series.episodes = config.episodes;
  series.trials = config.trials;
  series.report_interval = config.report_interval;
  series.entity_ids = entity_ids(config.scenario);
  series.mean_g.resize(static_cast<std::size_t>(config.episodes));
  series.std_g.resize(static_cast<std::size_t>(config.episodes));
  std::vector<double> column(n_trials);
  for (std::size_t e = 0; e < series.mean_g.size(); ++e) {
    for (std::size_t t = 0; t < n_trials; ++t) column[t] = results[t].global_utility[e];
    const auto [mean, sd] = mean_and_std(column);
    series.mean_g[e] = mean;
    if ((e + 1) % static_cast<std::size_t>(config.report_interval) == 0) series.std_g[e] = sd;
  }
  for (auto& r : results) {
    series.trial_g.push_back(std::move(r.global_utility));
    series.final_occupancy.push_back(std::move(r.final_occupancy));
  }
  return series;
}

std::vector<HistogramBin> distribution_histogram(const MetricsSeries& series) {
  std::vector<HistogramBin> bins;
  std::vector<double> column(series.final_occupancy.size());
  for (std::size_t i = 0; i < series.entity_ids.size(); ++i) {
    for (std::size_t t = 0; t < series.final_occupancy.size(); ++t) {
      column[t] = series.final_occupancy[t].at(i);
    }
    const auto [mean, sd] = mean_and_std(column);
    bins.push_back({series.entity_ids[i], mean, sd});
  }
  return bins;
}

FinalPerformance final_performance(const MetricsSeries& series, int window) {
  if (window < 1 || window > series.episodes) throw std::invalid_argument("final window out of range");
  FinalPerformance out;
  for (const auto& g : series.trial_g) {
    double sum = 0.0;
    for (auto it = g.end() - window; it != g.end(); ++it) sum += *it;
    out.per_trial.push_back(sum / window);
  }
  std::tie(out.mean, out.std_dev) = mean_and_std(out.per_trial);
  if (!out.per_trial.empty()) out.std_error = out.std_dev / std::sqrt(static_cast<double>(out.per_trial.size()));
  return out;
}

std::vector<double> moving_average(std::span<const double> values, int window) {
  std::vector<double> out(values.begin(), values.end());
  if (window <= 1) return out;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - static_cast<std::size_t>(window)];
    const auto n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
    out[i] = sum / static_cast<double>(n);
  }
  return out;
}

std::uint64_t composition_count(int n, int k) {
  if (n < 0 || k < 1) return 0;
  // C(n + k - 1, k - 1) computed incrementally; every prefix product is an
  // exact binomial, so the division is exact.
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (int i = 1; i < k; ++i) {
    const auto num = static_cast<std::uint64_t>(n + i);
    if (c > cap / num) return cap;
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

namespace {

/// Partitions of n into at most k parts, saturating.
std::uint64_t partition_count(int n, int k) {
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  // p[j][m]: partitions of m into parts of size <= j (conjugate: at most j parts).
  std::vector<std::uint64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= k; ++part) {
    for (int m = part; m <= n; ++m) {
      const auto add = p[static_cast<std::size_t>(m - part)];
      auto& slot = p[static_cast<std::size_t>(m)];
      slot = slot > cap - add ? cap : slot + add;
    }
  }
  return p[static_cast<std::size_t>(n)];
}

bool identical_sections(std::span<const Resource> sections) {
  return std::all_of(sections.begin(), sections.end(), [&](const Resource& r) {
    return r.capacity == sections.front().capacity && r.weight == sections.front().weight;
  });
}

}  // namespace

NetworkOptimum oracle_network_optimum(const NetworkScenario& scenario, std::uint64_t limit) {
  const auto& net = scenario.network;
  if (scenario.agents < 0) throw std::invalid_argument("agent count must be >= 0");
  const int k = static_cast<int>(net.paths().size());
  const auto total = composition_count(scenario.agents, k);
  if (total > limit) {
    throw CapacityExceeded("network oracle would enumerate " + std::to_string(total) +
                           " compositions (limit " + std::to_string(limit) + ")");
  }

  NetworkOptimum best;
  best.global_utility = -std::numeric_limits<double>::infinity();
  PathCounts counts(std::vector<int>(static_cast<std::size_t>(k), 0));
  constexpr double tie_tol = 1e-9;

  std::function<void(int, int)> fill = [&](int index, int remaining) {
    if (index == k - 1) {
      counts[static_cast<std::size_t>(index)] = remaining;
      const double g = network_global_utility(net, scenario.kind, counts);
      ++best.evaluated;
      if (g > best.global_utility + tie_tol) {
        best.global_utility = g;
        best.best = counts;
        best.ties.assign(1, counts);
      } else if (g >= best.global_utility - tie_tol) {
        best.ties.push_back(counts);
        if (g > best.global_utility) {
          best.global_utility = g;
          best.best = counts;
        }
      }
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      counts[static_cast<std::size_t>(index)] = v;
      fill(index + 1, remaining - v);
    }
  };
  fill(0, scenario.agents);
  // Ties recorded before a strictly better value are stale.
  std::erase_if(best.ties, [&](const PathCounts& c) {
    return network_global_utility(net, scenario.kind, c) < best.global_utility - tie_tol;
  });
  return best;
}

StripOptimum oracle_strip_optimum(const StripScenario& scenario, std::uint64_t limit) {
  validate_resources(scenario.sections);
  if (scenario.agents < 0) throw std::invalid_argument("agent count must be >= 0");
  const auto& sections = scenario.sections;
  const int k = static_cast<int>(sections.size());
  if (k < 1) throw std::invalid_argument("strip has no sections");
  const int n = scenario.agents;

  StripOptimum best;
  best.multiset = identical_sections(sections);
  best.global_utility = -std::numeric_limits<double>::infinity();
  const auto total = best.multiset ? partition_count(n, k) : composition_count(n, k);
  if (total > limit) {
    throw CapacityExceeded("strip oracle would enumerate " + std::to_string(total) + " layouts (limit " +
                           std::to_string(limit) + ")");
  }

  auto counts = ConsumptionVector::zeros(sections.size());
  std::function<void(int, int, int)> fill = [&](int index, int remaining, int ceiling) {
    if (index == k - 1) {
      if (remaining > ceiling) return;
      counts[static_cast<std::size_t>(index)] = remaining;
      const double g = global_utility(sections, counts, scenario.kind);
      ++best.evaluated;
      if (g > best.global_utility) {
        best.global_utility = g;
        best.best = counts;
      }
      return;
    }
    for (int v = std::min(remaining, ceiling); v >= 0; --v) {
      // Multisets: non-increasing parts; stop once the rest cannot fit.
      if (best.multiset && static_cast<long>(v) * (k - index) < remaining) break;
      counts[static_cast<std::size_t>(index)] = v;
      fill(index + 1, remaining - v, best.multiset ? v : n);
    }
  };
  fill(0, n, n);
  return best;
}

}  // namespace congestion
