#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace congestion {

using Rng = std::mt19937_64;

/// Dense state x action value table, zero-initialised.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t states, std::size_t actions);

  std::size_t states() const { return states_; }
  std::size_t actions() const { return actions_; }

  double operator()(std::size_t s, std::size_t a) const { return values_[s * actions_ + a]; }
  std::span<const double> row(std::size_t s) const { return {values_.data() + s * actions_, actions_}; }
  double max_value(std::size_t s) const;

  /// Throws std::invalid_argument on an out-of-range index or a non-finite value.
  void set(std::size_t s, std::size_t a, double value);
  void check_index(std::size_t s, std::size_t a) const;

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> values_;
};

struct LearnerConfig {
  double alpha = 0.1;
  double alpha_decay = 1.0;
  double gamma = 0.9;
  double epsilon = 0.05;
  double epsilon_decay = 0.9999;

  void validate() const;

  friend bool operator==(const LearnerConfig&, const LearnerConfig&) = default;
};

/// One tabular Q-learning step. With `terminal` the bootstrap term is zero.
void q_update(QTable& table, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              double alpha, double gamma, bool terminal);

/// Epsilon-greedy choice; greedy ties are broken uniformly at random.
std::size_t select_action(const QTable& table, std::size_t s, double epsilon, Rng& rng);

struct DecayedParams {
  double alpha = 0.0;
  double epsilon = 0.0;
};

/// value_t = value_0 * rate^t, applied once per episode.
DecayedParams decay(const LearnerConfig& config, long episode);

/// An independent learner: its own table and its own random stream.
struct QLearner {
  QTable table;
  Rng rng;
};

}  // namespace congestion
