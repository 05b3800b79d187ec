#include "udn/env.hpp"

#include <stdexcept>
#include <string>

namespace udn {

std::uint64_t EnvState::key() const {
  if (qos_bits.size() > 64) throw std::length_error("state key supports at most 64 users");
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < qos_bits.size(); ++i)
    if (qos_bits[i]) k |= std::uint64_t{1} << i;
  return k;
}

Environment::Environment(Topology topology, EnvConfig config)
    : topology_(std::move(topology)), config_(config) {
  if (config_.num_subcarriers < 1) throw std::invalid_argument("need at least one subcarrier");
  if (config_.k_max < 1 || config_.f_max < 1) throw std::invalid_argument("k and f must be >= 1");
  if (!(config_.radio.ap_power_w > 0.0)) throw std::invalid_argument("AP power must be > 0");
  if (!(config_.radio.bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
}

EnvState Environment::reset() const {
  return EnvState{
      std::vector<std::uint8_t>(static_cast<std::size_t>(topology_.num_users()), 0),
      AssociationState(topology_.num_users(), topology_.num_aps(), config_.num_subcarriers,
                       config_.k_max, config_.f_max),
      0};
}

std::vector<std::uint8_t> Environment::qos_bits(std::span<const double> rates) const {
  std::vector<std::uint8_t> bits(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i)
    bits[i] = rates[i] >= config_.qos_threshold_bps ? 1 : 0;
  return bits;
}

StepResult Environment::step(const EnvState& state,
                             std::span<const UserAction> joint_action) const {
  if (static_cast<int>(joint_action.size()) != num_agents())
    throw std::invalid_argument("joint action has " + std::to_string(joint_action.size()) +
                                " entries, expected " + std::to_string(num_agents()));
  StepResult out{state, 0.0, {}, {}};
  out.outcomes.reserve(joint_action.size());
  for (int i = 0; i < num_agents(); ++i)
    out.outcomes.push_back(apply_action(out.next_state.association, i, joint_action[i], topology_));

  out.user_rates = user_rates(topology_, out.next_state.association, config_.radio);
  out.reward = network_utility(out.user_rates);
  out.next_state.qos_bits = qos_bits(out.user_rates);
  ++out.next_state.step_index;
  return out;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  double total = 0.0, weight = gamma;
  for (double u : rewards) {
    total += weight * u;
    weight *= gamma;
  }
  return total;
}

}  // namespace udn
