#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "support.hpp"
#include "udn/env.hpp"

using namespace udn;
using udn::test::colocated;

TEST_SUITE("env") {

TEST_CASE("reset gives an empty state") {
  const Environment env(colocated(3, 2, std::vector<double>(6, 1e-7)), {});
  const EnvState s = env.reset();
  CHECK(s.qos_bits == std::vector<std::uint8_t>(3, 0));
  CHECK(s.step_index == 0);
  CHECK(s.key() == 0);
  CHECK(s.association == AssociationState(3, 2, 4, 4, 4));
  CHECK(env.reset().association == s.association);
  CHECK(env.num_actions() == 8);
}

TEST_CASE("single user gives a length-one state") {
  const Environment env(colocated(1, 1, {1e-7}), {});
  CHECK(env.reset().qos_bits.size() == 1);
}

TEST_CASE("rejected joint action leaves the configuration unchanged") {
  const Topology t = test::make_topology({{0, 0}, {100, 0}}, {{0, 0}, {0, 0}}, 10.0,
                                         {1e-7, 1e-7, 1e-7, 1e-7});
  const Environment env(t, {});
  EnvState s = env.reset();
  std::vector<UserAction> first{{0, 0}, {0, 1}};
  StepResult r = env.step(s, first);
  const double before = r.reward;
  std::vector<UserAction> no_op{{1, 2}, {1, 3}};
  StepResult r2 = env.step(r.next_state, no_op);
  CHECK(r2.next_state.association == r.next_state.association);
  CHECK(r2.next_state.step_index == 2);
  CHECK(r2.reward == before);
  CHECK(r2.outcomes == std::vector<ActionOutcome>(2, ActionOutcome::RejectedOutOfRange));
}

TEST_CASE("single link reward chain") {
  const double g = 2.3e-9;
  const Environment env(colocated(1, 1, {g}), EnvConfig{{}, 1, 1, 1, 2e6});
  const StepResult r = env.step(env.reset(), std::vector<UserAction>{{0, 0}});
  const RadioParams radio;
  const double want = radio.bandwidth_hz * std::log2(1.0 + radio.ap_power_w * g / radio.noise_w);
  CHECK(r.reward == doctest::Approx(want).epsilon(1e-13));
  CHECK(r.next_state.qos_bits[0] == (want >= 2e6 ? 1 : 0));
}

TEST_CASE("qos threshold is inclusive") {
  const Environment env(colocated(2, 1, {1e-7, 1e-7}), EnvConfig{{}, 4, 4, 4, 2e6});
  const auto bits = env.qos_bits(std::vector<double>{2e6, 2e6 - 1.0});
  CHECK(bits == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("step rejects the wrong number of actions") {
  const Environment env(colocated(2, 1, {1e-7, 1e-7}), {});
  CHECK_THROWS_AS(env.step(env.reset(), std::vector<UserAction>{{0, 0}}), std::invalid_argument);
}

TEST_CASE("tiny instance reward matches the oracle and invariants hold every step") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 3, m = 1 + trial % 3, L = 1 + trial % 2;
    EnvConfig cfg{{}, L, 1 + trial % 2, 1 + trial % 3, 2e6};
    const Environment env(test::random_topology(n, m, rng), cfg);
    EnvState s = env.reset();
    std::uniform_int_distribution<int> a(0, env.num_actions() - 1);
    for (int t = 0; t < 25; ++t) {
      std::vector<UserAction> joint;
      for (int i = 0; i < n; ++i) joint.push_back(UserAction::from_flat(a(rng), L));
      StepResult r = env.step(s, joint);
      const auto want = test::rate_oracle(env.topology(), r.next_state.association, cfg.radio);
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        CHECK(test::relative_error(r.user_rates[i], want[i]) < 1e-12);
        CHECK(r.next_state.qos_bits[i] == (r.user_rates[i] >= cfg.qos_threshold_bps ? 1 : 0));
        total += r.user_rates[i];
      }
      CHECK(r.reward == doctest::Approx(total).epsilon(1e-14));
      CHECK(r.reward >= 0.0);
      CHECK(validate(r.next_state.association, env.topology()).empty());
      CHECK(r.next_state.step_index == t + 1);
      s = std::move(r.next_state);
    }
  }
}

TEST_CASE("step is pure") {
  std::mt19937_64 rng(3);
  const Environment env(test::random_topology(3, 3, rng), {});
  const EnvState s = env.reset();
  const std::vector<UserAction> joint{{0, 1}, {1, 2}, {2, 3}};
  const StepResult a = env.step(s, joint);
  const StepResult b = env.step(s, joint);
  CHECK(a.reward == b.reward);
  CHECK(a.next_state.association == b.next_state.association);
  CHECK(s.step_index == 0);
}

TEST_CASE("state key packs the qos bits") {
  EnvState s{{1, 0, 1, 1}, AssociationState(4, 1, 1, 1, 1), 0};
  CHECK(s.key() == 0b1101);
}

TEST_CASE("discounted return") {
  CHECK(discounted_return(std::vector<double>{1, 1}, 0.9) == doctest::Approx(1.71));
  CHECK(discounted_return(std::vector<double>{}, 0.9) == 0.0);
  CHECK(discounted_return(std::vector<double>{5}, 0.0) == 0.0);
  CHECK_THROWS_AS(discounted_return(std::vector<double>{1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(discounted_return(std::vector<double>{1}, -0.1), std::invalid_argument);
}

TEST_CASE("discounted return is the discounted sum of per-user utilities") {
  // Sum over users of each user's discounted rate equals the discounted team reward.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 5e6), g(0.0, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double gamma = g(rng);
    std::vector<std::vector<double>> per_user(4, std::vector<double>(30));
    std::vector<double> team(30, 0.0);
    for (auto& row : per_user)
      for (int t = 0; t < 30; ++t) {
        row[t] = u(rng);
        team[t] += row[t];
      }
    double sum_users = 0.0;
    for (const auto& row : per_user) sum_users += discounted_return(row, gamma);
    CHECK(discounted_return(team, gamma) == doctest::Approx(sum_users).epsilon(1e-12));
  }
}

}
