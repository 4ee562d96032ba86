#include "congestion/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace congestion {

QTable::QTable(std::size_t states, std::size_t actions)
    : states_(states), actions_(actions), values_(states * actions, 0.0) {
  if (states == 0 || actions == 0) throw std::invalid_argument("Q-table needs at least one state and one action");
}

void QTable::check_index(std::size_t s, std::size_t a) const {
  if (s >= states_ || a >= actions_) {
    throw std::invalid_argument("Q-table index (" + std::to_string(s) + ", " + std::to_string(a) +
                                ") out of range");
  }
}

double QTable::max_value(std::size_t s) const {
  if (s >= states_) throw std::invalid_argument("state " + std::to_string(s) + " out of range");
  const auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

void QTable::set(std::size_t s, std::size_t a, double value) {
  check_index(s, a);
  if (!std::isfinite(value)) throw std::invalid_argument("refusing to store a non-finite Q-value");
  values_[s * actions_ + a] = value;
}

void LearnerConfig::validate() const {
  auto in = [](double v, double lo, double hi, bool open_lo) { return (open_lo ? v > lo : v >= lo) && v <= hi; };
  if (!in(alpha, 0.0, 1.0, true)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!in(alpha_decay, 0.0, 1.0, true)) throw std::invalid_argument("alpha_decay must be in (0, 1]");
  if (!in(gamma, 0.0, 1.0, false)) throw std::invalid_argument("gamma must be in [0, 1]");
  if (!in(epsilon, 0.0, 1.0, false)) throw std::invalid_argument("epsilon must be in [0, 1]");
  if (!in(epsilon_decay, 0.0, 1.0, true)) throw std::invalid_argument("epsilon_decay must be in (0, 1]");
}

void q_update(QTable& table, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              double alpha, double gamma, bool terminal) {
  table.check_index(s, a);
  table.check_index(s_next, 0);
  const double bootstrap = terminal ? 0.0 : table.max_value(s_next);
  const double q = table(s, a);
  table.set(s, a, q + alpha * (reward + gamma * bootstrap - q));
}

std::size_t select_action(const QTable& table, std::size_t s, double epsilon, Rng& rng) {
  const auto n = table.actions();
  if (n == 0) throw std::invalid_argument("no actions to select from");
  if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }
  const auto q = table.row(s);
  const double best = *std::max_element(q.begin(), q.end());
  std::size_t ties = 0;
  for (auto v : q) ties += (v == best);
  if (ties == 1) return static_cast<std::size_t>(std::find(q.begin(), q.end(), best) - q.begin());
  auto pick = std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng);
  for (std::size_t a = 0; a < n; ++a) {
    if (q[a] == best && pick-- == 0) return a;
  }
  return n - 1;  // unreachable
}

DecayedParams decay(const LearnerConfig& config, long episode) {
  if (episode < 0) throw std::invalid_argument("episode count must be >= 0");
  const auto t = static_cast<double>(episode);
  return {config.alpha * std::pow(config.alpha_decay, t), config.epsilon * std::pow(config.epsilon_decay, t)};
}

}  // namespace congestion
