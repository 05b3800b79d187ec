#include "udn/tabular.hpp"

#include <algorithm>
#include <stdexcept>

namespace udn {

QTable::QTable(int num_actions, double alpha, double gamma, double epsilon)
    : num_actions_(num_actions), alpha_(0.0), gamma_(gamma), epsilon_(0.0) {
  if (num_actions < 1) throw std::invalid_argument("Q-table needs at least one action");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  set_alpha(alpha);
  set_epsilon(epsilon);
}

void QTable::set_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  alpha_ = alpha;
}

void QTable::set_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  epsilon_ = epsilon;
}

double QTable::value(std::uint64_t state, int action) const {
  auto it = rows_.find(state);
  return it == rows_.end() ? 0.0 : it->second.at(static_cast<std::size_t>(action));
}

std::vector<double> QTable::row(std::uint64_t state) const {
  auto it = rows_.find(state);
  return it == rows_.end() ? std::vector<double>(num_actions_, 0.0) : it->second;
}

std::vector<double>& QTable::row_ref(std::uint64_t state) {
  auto [it, inserted] = rows_.try_emplace(state);
  if (inserted) it->second.assign(num_actions_, 0.0);
  return it->second;
}

void QTable::set_value(std::uint64_t state, int action, double value) {
  row_ref(state).at(static_cast<std::size_t>(action)) = value;
}

double QTable::max_value(std::uint64_t state) const {
  auto it = rows_.find(state);
  if (it == rows_.end()) return 0.0;
  return *std::max_element(it->second.begin(), it->second.end());
}

int QTable::greedy(std::uint64_t state) const {
  auto it = rows_.find(state);
  if (it == rows_.end()) return 0;
  // max_element returns the first maximum.
  return static_cast<int>(std::max_element(it->second.begin(), it->second.end()) -
                          it->second.begin());
}

void QTable::update(std::uint64_t state, int action, double reward, std::uint64_t next_state) {
  const double bootstrap = max_value(next_state);
  double& q = row_ref(state).at(static_cast<std::size_t>(action));
  q += alpha_ * (reward + gamma_ * bootstrap - q);
}

int epsilon_greedy(const QTable& table, std::uint64_t state, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < table.epsilon()) {
    std::uniform_int_distribution<int> pick(0, table.num_actions() - 1);
    return pick(rng);
  }
  return table.greedy(state);
}

namespace {

double linear_schedule(double start, double end, int index, int count) {
  if (count <= 1) return start;
  return start + (end - start) * static_cast<double>(index) / static_cast<double>(count - 1);
}

}  // namespace

TabularResult train_tabular(const Environment& env, const TabularConfig& cfg) {
  if (cfg.episodes < 1 || cfg.steps_per_episode < 1)
    throw std::invalid_argument("episodes and steps must be >= 1");
  const int n = env.num_agents();
  const int L = env.config().num_subcarriers;

  TabularResult out;
  out.tables.assign(n, QTable(env.num_actions(), cfg.alpha, cfg.gamma, cfg.epsilon_start));
  std::mt19937_64 rng(cfg.seed);
  std::vector<UserAction> joint(n);
  std::vector<int> flat(n);

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const double eps = linear_schedule(cfg.epsilon_start, cfg.epsilon_end, ep, cfg.episodes);
    for (auto& t : out.tables) t.set_epsilon(eps);
    EnvState state = env.reset();
    double sum = 0.0;
    for (int t = 0; t < cfg.steps_per_episode; ++t) {
      const std::uint64_t s = state.key();
      for (int i = 0; i < n; ++i) {
        flat[i] = epsilon_greedy(out.tables[i], s, rng);
        joint[i] = UserAction::from_flat(flat[i], L);
      }
      StepResult r = env.step(state, joint);
      const std::uint64_t s_next = r.next_state.key();
      for (int i = 0; i < n; ++i) out.tables[i].update(s, flat[i], r.reward * cfg.reward_scale, s_next);
      sum += r.reward;
      state = std::move(r.next_state);
      ++out.total_steps;
    }
    out.episode_reward_bps.push_back(sum / cfg.steps_per_episode);
  }
  return out;
}

GreedyRollout greedy_rollout(const Environment& env, const std::vector<QTable>& tables, int steps) {
  if (static_cast<int>(tables.size()) != env.num_agents())
    throw std::invalid_argument("need one Q-table per agent");
  GreedyRollout out{{}, {}, env.reset()};
  std::vector<UserAction> joint(tables.size());
  for (int t = 0; t < steps; ++t) {
    const std::uint64_t s = out.final_state.key();
    for (std::size_t i = 0; i < tables.size(); ++i)
      joint[i] = UserAction::from_flat(tables[i].greedy(s), env.config().num_subcarriers);
    StepResult r = env.step(out.final_state, joint);
    out.step_utility_bps.push_back(r.reward);
    out.step_user_rate_bps.push_back(r.user_rates);
    out.final_state = std::move(r.next_state);
  }
  return out;
}

}  // namespace udn
