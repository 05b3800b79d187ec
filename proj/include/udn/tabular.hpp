// Independent tabular Q-learners sharing the team reward.
#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "udn/env.hpp"

namespace udn {

/// Sparse Q-table keyed by the packed QoS bit-vector. Missing rows read as 0.
class QTable {
 public:
  QTable(int num_actions, double alpha, double gamma, double epsilon);

  int num_actions() const { return num_actions_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  double epsilon() const { return epsilon_; }
  void set_alpha(double alpha);
  void set_epsilon(double epsilon);

  double value(std::uint64_t state, int action) const;
  /// Copy of Q(s, .), zeros for an unseen state.
  std::vector<double> row(std::uint64_t state) const;
  void set_value(std::uint64_t state, int action, double value);

  double max_value(std::uint64_t state) const;
  /// argmax_a Q(s, a), lowest index on ties.
  int greedy(std::uint64_t state) const;

  /// Q(s,a) += alpha [u + gamma max_a' Q(s',a') - Q(s,a)]
  void update(std::uint64_t state, int action, double reward, std::uint64_t next_state);

  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<double>& row_ref(std::uint64_t state);

  int num_actions_;
  double alpha_;
  double gamma_;
  double epsilon_;
  std::unordered_map<std::uint64_t, std::vector<double>> rows_;
};

/// Uniform over all actions with probability epsilon, greedy otherwise.
int epsilon_greedy(const QTable& table, std::uint64_t state, std::mt19937_64& rng);

struct TabularConfig {
  int episodes = 2000;
  int steps_per_episode = 20;
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon_start = 0.99;
  double epsilon_end = 0.01;
  /// Rewards fed to the learners are utility_bps * reward_scale.
  double reward_scale = 1e-6;
  std::uint64_t seed = 1;
};

struct GreedyRollout {
  std::vector<double> step_utility_bps;
  std::vector<std::vector<double>> step_user_rate_bps;
  EnvState final_state;
};

struct TabularResult {
  std::vector<QTable> tables;
  /// Mean per-step utility of each training episode, bits/s.
  std::vector<double> episode_reward_bps;
  long long total_steps = 0;
};

TabularResult train_tabular(const Environment& env, const TabularConfig& config);

/// Runs every agent greedily (epsilon = 0) from reset for `steps` steps.
GreedyRollout greedy_rollout(const Environment& env, const std::vector<QTable>& tables, int steps);

}  // namespace udn
