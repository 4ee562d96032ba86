#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "congestion/learner.hpp"
#include "oracles.hpp"

using namespace congestion;

TEST_CASE("Q-table starts at zero and rejects bad writes") {
  QTable q(4, 3);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t a = 0; a < 3; ++a) CHECK(q(s, a) == 0.0);
  }
  CHECK_THROWS_AS(q.set(4, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(q.set(0, 3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(q.set(0, 0, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(q.set(0, 0, std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(QTable(0, 3), std::invalid_argument);
  q.set(2, 1, -4.0);
  CHECK(q.max_value(2) == 0.0);
  CHECK(q.row(2)[1] == -4.0);
}

TEST_CASE("q_update arithmetic") {
  QTable q(2, 2);
  q_update(q, 0, 0, 1.0, 1, 0.1, 0.9, false);
  CHECK(q(0, 0) == doctest::Approx(0.1).epsilon(1e-15));

  QTable frozen(2, 2);
  frozen.set(1, 1, 3.0);
  const auto before = frozen;
  q_update(frozen, 0, 1, 5.0, 1, 0.0, 0.9, false);
  CHECK(frozen == before);

  QTable t(1, 2);
  t.set(0, 0, 2.0);
  q_update(t, 0, 0, 2.0, 0, 0.5, 0.37, true);
  CHECK(t(0, 0) == 2.0);

  // Bootstrapping reads the best action of the next state.
  QTable b(2, 3);
  b.set(1, 2, 10.0);
  q_update(b, 0, 1, 0.0, 1, 0.5, 0.9, false);
  CHECK(b(0, 1) == doctest::Approx(4.5).epsilon(1e-15));

  CHECK_THROWS_AS(q_update(q, 2, 0, 1.0, 0, 0.1, 0.9, false), std::invalid_argument);
  CHECK_THROWS_AS(q_update(q, 0, 0, 1.0, 2, 0.1, 0.9, false), std::invalid_argument);
}

TEST_CASE("select_action") {
  Rng rng(7);
  QTable q(1, 3);
  q.set(0, 2, 1.0);
  for (int i = 0; i < 100; ++i) CHECK(select_action(q, 0, 0.0, rng) == 2);

  SUBCASE("epsilon one is uniform") {
    std::array<int, 3> hits{};
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++hits[select_action(q, 0, 1.0, rng)];
    const double p = 1.0 / 3.0;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (int h : hits) CHECK(std::abs(h - n * p) <= 3 * sigma);
  }
  SUBCASE("two-way tie splits evenly") {
    QTable tie(1, 3);
    tie.set(0, 0, 0.5);
    tie.set(0, 2, 0.5);
    std::array<int, 3> hits{};
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++hits[select_action(tie, 0, 0.0, rng)];
    CHECK(hits[1] == 0);
    const double sigma = std::sqrt(n * 0.25);
    CHECK(std::abs(hits[0] - n / 2.0) <= 3 * sigma);
  }
}

TEST_CASE("decay schedule") {
  LearnerConfig c;
  c.epsilon = 0.05;
  c.epsilon_decay = 0.9999;
  c.alpha = 0.1;
  c.alpha_decay = 1.0;
  CHECK(decay(c, 0).epsilon == 0.05);
  CHECK(decay(c, 4000).epsilon == doctest::Approx(0.0335153319).epsilon(1e-9));
  CHECK(decay(c, 4000).epsilon == doctest::Approx(0.03352).epsilon(1e-4));
  CHECK(decay(c, 123456).alpha == 0.1);
  CHECK_THROWS_AS(decay(c, -1), std::invalid_argument);
}

TEST_CASE("learner config ranges") {
  CHECK_NOTHROW(LearnerConfig{}.validate());
  auto bad = [](auto mutate) {
    LearnerConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](LearnerConfig& c) { c.alpha = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](LearnerConfig& c) { c.alpha = 1.5; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](LearnerConfig& c) { c.gamma = -0.1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](LearnerConfig& c) { c.epsilon = 1.1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](LearnerConfig& c) { c.epsilon_decay = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](LearnerConfig& c) { c.alpha_decay = 1.01; }).validate(), std::invalid_argument);
  CHECK_NOTHROW(bad([](LearnerConfig& c) { c.gamma = 0.0; c.epsilon = 0.0; c.alpha = 1.0; }).validate());
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: terminal updates converge monotonically to the reward") {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    QTable q(1, 1);
    const double start = gen.real(-10, 10);
    const double r = gen.real(-10, 10);
    const double alpha = gen.real(0.01, 1.0);
    q.set(0, 0, start);
    double gap = std::abs(start - r);
    for (int i = 0; i < 200; ++i) {
      q_update(q, 0, 0, r, 0, alpha, 0.9, true);
      const double now = std::abs(q(0, 0) - r);
      CHECK(now <= gap);
      gap = now;
    }
    CHECK(gap <= std::abs(start - r) * std::pow(1 - alpha, 200) + 1e-12);
  }
}

TEST_CASE("property: greedy choice is always a maximizer") {
  oracle::Gen gen(32);
  Rng rng(33);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto actions = static_cast<std::size_t>(gen.integer(1, 6));
    QTable q(1, actions);
    // Coarse values so ties are common.
    for (std::size_t a = 0; a < actions; ++a) q.set(0, a, gen.integer(-2, 2));
    const auto a = select_action(q, 0, 0.0, rng);
    CHECK(q(0, a) == q.max_value(0));
  }
}

TEST_CASE("property: decay is non-increasing and positive") {
  oracle::Gen gen(34);
  for (int trial = 0; trial < 100; ++trial) {
    LearnerConfig c;
    c.alpha = gen.real(0.01, 1.0);
    c.alpha_decay = gen.real(0.9, 1.0);
    c.epsilon = gen.real(0.01, 1.0);
    c.epsilon_decay = gen.real(0.9, 1.0);
    auto prev = decay(c, 0);
    for (long t = 1; t <= 5000; t += 7) {
      const auto now = decay(c, t);
      CHECK(now.alpha <= prev.alpha);
      CHECK(now.epsilon <= prev.epsilon);
      CHECK(now.alpha > 0.0);
      CHECK(now.epsilon > 0.0);
      prev = now;
    }
  }
}

TEST_CASE("property: identical seeds give identical choices and tables") {
  Rng a(99), b(99);
  QTable qa(3, 3), qb(3, 3);
  for (int step = 0; step < 2000; ++step) {
    const std::size_t s = static_cast<std::size_t>(step % 3);
    const auto xa = select_action(qa, s, 0.3, a);
    const auto xb = select_action(qb, s, 0.3, b);
    REQUIRE(xa == xb);
    const double r = std::sin(step * 0.37);
    q_update(qa, s, xa, r, (s + 1) % 3, 0.2, 0.9, false);
    q_update(qb, s, xb, r, (s + 1) % 3, 0.2, 0.9, false);
  }
  CHECK(qa == qb);
}
