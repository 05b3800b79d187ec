// Multi-agent DQN trainer: one evaluated/target network pair per user.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "udn/env.hpp"
#include "udn/qnetwork.hpp"

namespace udn {

enum class EpsilonSchedule { Linear, Exponential };

const char* to_string(EpsilonSchedule s);
EpsilonSchedule epsilon_schedule_from_string(const std::string& s);

struct TrainConfig {
  double learning_rate = 1e-4;
  double gamma = 0.9;
  double epsilon_start = 0.99;
  double epsilon_end = 1e-4;
  int episodes = 400;
  int steps_per_episode = 500;
  int target_sync_steps = 100;
  int minibatch = 32;
  int replay_capacity = 10000;
  double rms_decay = 0.9;
  double rms_delta = 1e-8;
  std::vector<int> hidden = {100, 200, 50};
  /// Learner rewards are utility_bps * reward_scale (Mbps by default).
  double reward_scale = 1e-6;
  /// Steps at the end of the last episode averaged into the reported throughput.
  int throughput_window = 50;
  /// When false, epsilon stays at epsilon_start for every episode.
  bool decay_epsilon = true;
  // Geometric decay reaches small epsilon early enough to leave a greedy tail;
  // a linear ramp is still exploring heavily at three quarters of the run.
  EpsilonSchedule epsilon_schedule = EpsilonSchedule::Exponential;
  std::uint64_t seed = 1;

  void validate() const;
  /// epsilon_start at episode 0 and epsilon_end at the last one, interpolated
  /// linearly or geometrically in the episode index.
  double epsilon_at(int episode) const;
};

struct TrainResult {
  std::vector<QNetwork> networks;
  /// Target networks as of the last sync.
  std::vector<QNetwork> target_networks;
  /// Mean per-step utility of each episode, bits/s.
  std::vector<double> episode_reward_bps;
  /// Per-user rate averaged over the throughput window of the last episode.
  std::vector<double> window_user_rate_bps;
  double window_utility_bps = 0.0;
  std::vector<std::size_t> replay_sizes;
  int target_syncs = 0;
  /// Times an evaluated network went non-finite and was restored from its target.
  int divergence_resets = 0;
};

TrainResult train_madqn(const Environment& env, const TrainConfig& config);

/// Greedy rollout with trained networks from reset; per-step utilities.
std::vector<double> greedy_rollout(const Environment& env, const std::vector<QNetwork>& networks,
                                   int steps);

}  // namespace udn
