// Multi-agent environment: QoS-bit state, simultaneous actions, shared reward.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "udn/association.hpp"
#include "udn/geometry.hpp"
#include "udn/link_rate.hpp"

namespace udn {

struct EnvConfig {
  RadioParams radio;
  int num_subcarriers = 4;
  int k_max = 4;
  int f_max = 4;
  double qos_threshold_bps = 2e6;
};

struct EnvState {
  /// s_i = 1 iff user i currently meets the QoS rate.
  std::vector<std::uint8_t> qos_bits;
  AssociationState association;
  int step_index = 0;

  /// Bit i of the key is qos_bits[i]; requires N <= 64.
  std::uint64_t key() const;
};

struct StepResult {
  EnvState next_state;
  /// Shared team reward: network utility in bits/s.
  double reward = 0.0;
  std::vector<double> user_rates;
  std::vector<ActionOutcome> outcomes;
};

class Environment {
 public:
  Environment(Topology topology, EnvConfig config);

  const Topology& topology() const { return topology_; }
  const EnvConfig& config() const { return config_; }
  int num_agents() const { return topology_.num_users(); }
  /// M * L.
  int num_actions() const { return topology_.num_aps() * config_.num_subcarriers; }

  /// Empty association, all QoS bits zero, t = 0.
  EnvState reset() const;

  /// Applies one action per user in agent-index order, then recomputes rates,
  /// reward and QoS bits. Throws std::invalid_argument on wrong arity.
  StepResult step(const EnvState& state, std::span<const UserAction> joint_action) const;

  std::vector<std::uint8_t> qos_bits(std::span<const double> rates) const;

 private:
  Topology topology_;
  EnvConfig config_;
};

/// sum_{t=1..T} gamma^t u_t; the first reward is already discounted once.
double discounted_return(std::span<const double> rewards, double gamma);

}  // namespace udn
