#include "udn/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace udn {

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon_start must lie in [0, 1]");
  require(epsilon_end >= 0.0 && epsilon_end <= epsilon_start,
          "epsilon_end must lie in [0, epsilon_start]");
  require(episodes >= 1, "episodes must be >= 1");
  require(steps_per_episode >= 1, "steps_per_episode must be >= 1");
  require(target_sync_steps >= 1, "target_sync_steps must be >= 1");
  require(minibatch >= 1, "minibatch must be >= 1");
  require(replay_capacity >= 1, "replay_capacity must be >= 1");
  require(rms_decay >= 0.0 && rms_decay < 1.0, "rms_decay must lie in [0, 1)");
  require(rms_delta > 0.0, "rms_delta must be > 0");
  require(reward_scale > 0.0, "reward_scale must be > 0");
  require(throughput_window >= 1, "throughput_window must be >= 1");
  for (int h : hidden) require(h >= 1, "hidden layer sizes must be >= 1");
}

const char* to_string(EpsilonSchedule s) {
  return s == EpsilonSchedule::Linear ? "linear" : "exponential";
}

EpsilonSchedule epsilon_schedule_from_string(const std::string& s) {
  if (s == "linear") return EpsilonSchedule::Linear;
  if (s == "exponential") return EpsilonSchedule::Exponential;
  throw std::invalid_argument("unknown epsilon schedule '" + s + "'");
}

double TrainConfig::epsilon_at(int episode) const {
  if (!decay_epsilon || episodes <= 1) return epsilon_start;
  const double frac = static_cast<double>(episode) / static_cast<double>(episodes - 1);
  if (epsilon_schedule == EpsilonSchedule::Exponential && epsilon_end > 0.0)
    return epsilon_start * std::pow(epsilon_end / epsilon_start, frac);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

namespace {

struct Agent {
  QNetwork evaluated;
  QNetwork target;
  RmsProp optimizer;
  ReplayMemory memory;
  /// max_a' Q_target(s', a') per next-state key; cleared on every sync.
  std::unordered_map<std::uint64_t, double> target_max{};

  double bootstrap(std::uint64_t next_state, int width) {
    auto [it, inserted] = target_max.try_emplace(next_state, 0.0);
    if (inserted) it->second = target.forward(encode_state(next_state, width)).maxCoeff();
    return it->second;
  }
};

int argmax(const Eigen::VectorXd& q) {
  Eigen::Index best = 0;
  q.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

TrainResult train_madqn(const Environment& env, const TrainConfig& cfg) {
  cfg.validate();
  const int n = env.num_agents();
  if (n > 64) throw std::invalid_argument("at most 64 agents supported");
  const int num_actions = env.num_actions();
  const int L = env.config().num_subcarriers;

  std::vector<int> sizes{n};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(num_actions);

  std::mt19937_64 rng(cfg.seed);
  std::vector<Agent> agents;
  agents.reserve(n);
  for (int i = 0; i < n; ++i) {
    QNetwork net = QNetwork::random(sizes, rng);
    RmsProp opt(net, cfg.learning_rate, cfg.rms_decay, cfg.rms_delta);
    agents.push_back({net, net, std::move(opt), ReplayMemory(static_cast<std::size_t>(cfg.replay_capacity))});
  }

  TrainResult out;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> any_action(0, num_actions - 1);
  std::vector<UserAction> joint(n);
  std::vector<int> flat(n);
  long long global_step = 0;

  Eigen::MatrixXd states;
  std::vector<int> batch_actions;
  std::vector<double> batch_targets;
  Gradients grads;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const double eps = cfg.epsilon_at(ep);
    const bool last_episode = ep + 1 == cfg.episodes;
    const int window_begin = cfg.steps_per_episode - std::min(cfg.throughput_window, cfg.steps_per_episode);
    std::vector<double> window_rates(n, 0.0);
    double window_utility = 0.0;

    EnvState state = env.reset();
    double episode_sum = 0.0;
    for (int t = 0; t < cfg.steps_per_episode; ++t) {
      const std::uint64_t s = state.key();
      const Eigen::VectorXd s_vec = encode_state(s, n);
      for (int i = 0; i < n; ++i) {
        flat[i] = coin(rng) < eps ? any_action(rng) : argmax(agents[i].evaluated.forward(s_vec));
        joint[i] = UserAction::from_flat(flat[i], L);
      }

      StepResult r = env.step(state, joint);
      const std::uint64_t s_next = r.next_state.key();
      const double reward = r.reward * cfg.reward_scale;
      episode_sum += r.reward;
      if (last_episode && t >= window_begin) {
        window_utility += r.reward;
        for (int i = 0; i < n; ++i) window_rates[i] += r.user_rates[i];
      }
      state = std::move(r.next_state);

      for (int i = 0; i < n; ++i) {
        Agent& ag = agents[i];
        ag.memory.push({s, flat[i], reward, s_next});
        const auto idx = ag.memory.sample_indices(static_cast<std::size_t>(cfg.minibatch), rng);
        const auto b = static_cast<Eigen::Index>(idx.size());
        states.resize(n, b);
        batch_actions.resize(idx.size());
        batch_targets.resize(idx.size());
        for (Eigen::Index c = 0; c < b; ++c) {
          const Transition& tr = ag.memory[idx[static_cast<std::size_t>(c)]];
          states.col(c) = encode_state(tr.state, n);
          batch_actions[static_cast<std::size_t>(c)] = tr.action;
          batch_targets[static_cast<std::size_t>(c)] = tr.reward + cfg.gamma * ag.bootstrap(tr.next_state, n);
        }
        loss_and_gradients(ag.evaluated, states, batch_actions, batch_targets, grads);
        ag.optimizer.step(ag.evaluated, grads);
      }

      ++global_step;
      if (global_step % cfg.target_sync_steps == 0) {
        for (auto& ag : agents) {
          ag.target_max.clear();
          if (ag.evaluated.all_finite()) {
            ag.target = ag.evaluated;
          } else {
            ag.evaluated = ag.target;
            ag.optimizer.reset();
            ++out.divergence_resets;
          }
        }
        ++out.target_syncs;
      }
    }
    out.episode_reward_bps.push_back(episode_sum / cfg.steps_per_episode);
    if (last_episode) {
      const double w = static_cast<double>(cfg.steps_per_episode - window_begin);
      for (auto& v : window_rates) v /= w;
      out.window_user_rate_bps = std::move(window_rates);
      out.window_utility_bps = window_utility / w;
    }
  }

  for (auto& ag : agents) {
    out.replay_sizes.push_back(ag.memory.size());
    out.networks.push_back(std::move(ag.evaluated));
    out.target_networks.push_back(std::move(ag.target));
  }
  return out;
}

std::vector<double> greedy_rollout(const Environment& env, const std::vector<QNetwork>& networks,
                                   int steps) {
  if (static_cast<int>(networks.size()) != env.num_agents())
    throw std::invalid_argument("need one network per agent");
  const int n = env.num_agents();
  std::vector<double> utilities;
  std::vector<UserAction> joint(n);
  EnvState state = env.reset();
  for (int t = 0; t < steps; ++t) {
    const Eigen::VectorXd s_vec = encode_state(state.key(), n);
    for (int i = 0; i < n; ++i)
      joint[i] = UserAction::from_flat(argmax(networks[i].forward(s_vec)), env.config().num_subcarriers);
    StepResult r = env.step(state, joint);
    utilities.push_back(r.reward);
    state = std::move(r.next_state);
  }
  return utilities;
}

}  // namespace udn
