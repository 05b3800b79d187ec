#include "udn/baselines.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "udn/link_rate.hpp"

namespace udn {

namespace {

PolicyVerdict finish(const Environment& env, AssociationState state) {
  LinkMetrics m = evaluate_links(env.topology(), state, env.config().radio);
  return {std::move(state), std::move(m.user_rate_bps), m.network_utility_bps};
}

}  // namespace

PolicyVerdict max_rsrp_policy(const Environment& env, std::mt19937_64& rng) {
  const Topology& topo = env.topology();
  const EnvConfig& cfg = env.config();
  AssociationState state = env.reset().association;
  std::uniform_int_distribution<int> pick_sub(0, cfg.num_subcarriers - 1);

  for (int i = 0; i < topo.num_users(); ++i) {
    std::vector<std::pair<double, int>> ranked;
    for (int j : topo.candidate_aps(i)) {
      if (state.load(j) >= cfg.f_max) continue;
      const double rsrp = cfg.radio.ap_power_w / (state.load(j) + 1) * topo.gain(i, j);
      ranked.emplace_back(rsrp, j);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (static_cast<int>(ranked.size()) > cfg.k_max) ranked.resize(cfg.k_max);
    const int l = pick_sub(rng);
    for (const auto& [rsrp, j] : ranked) apply_action(state, i, {j, l}, topo);
  }
  return finish(env, std::move(state));
}

PolicyVerdict random_policy(const Environment& env, std::mt19937_64& rng) {
  const Topology& topo = env.topology();
  const EnvConfig& cfg = env.config();
  AssociationState state = env.reset().association;
  for (int i = 0; i < topo.num_users(); ++i) {
    std::vector<UserAction> feasible;
    for (int j : topo.candidate_aps(i)) {
      if (!state.associated(i, j) && state.load(j) >= cfg.f_max) continue;
      for (int l = 0; l < cfg.num_subcarriers; ++l) feasible.push_back({j, l});
    }
    if (feasible.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
    apply_action(state, i, feasible[pick(rng)], topo);
  }
  return finish(env, std::move(state));
}

namespace {

struct Option {
  std::vector<int> aps;
  int subcarrier = -1;
};

std::vector<Option> user_options(const std::vector<int>& candidates, int k, int num_subcarriers) {
  std::vector<Option> out{Option{}};
  const int c = static_cast<int>(candidates.size());
  for (unsigned mask = 1; mask < (1u << c); ++mask) {
    if (std::popcount(mask) > k) continue;
    std::vector<int> aps;
    for (int b = 0; b < c; ++b)
      if (mask & (1u << b)) aps.push_back(candidates[b]);
    for (int l = 0; l < num_subcarriers; ++l) out.push_back({aps, l});
  }
  return out;
}

double binomial(int n, int r) {
  double v = 1.0;
  for (int t = 1; t <= r; ++t) v = v * (n - r + t) / t;
  return v;
}

}  // namespace

double brute_force_space_size(const Environment& env) {
  const Topology& topo = env.topology();
  const EnvConfig& cfg = env.config();
  double total = 1.0;
  for (int i = 0; i < topo.num_users(); ++i) {
    const int c = static_cast<int>(topo.candidate_aps(i).size());
    double subsets = 0.0;
    for (int s = 1; s <= std::min(c, cfg.k_max); ++s) subsets += binomial(c, s);
    total *= 1.0 + subsets * cfg.num_subcarriers;
  }
  return total;
}

PolicyVerdict brute_force_optimum(const Environment& env, double limit) {
  const Topology& topo = env.topology();
  const EnvConfig& cfg = env.config();
  const double space = brute_force_space_size(env);
  if (space > limit) {
    std::ostringstream os;
    os << "brute-force search space " << space << " exceeds limit " << limit;
    throw SearchSpaceTooLarge(os.str());
  }
  for (int i = 0; i < topo.num_users(); ++i)
    if (topo.candidate_aps(i).size() > 20) throw SearchSpaceTooLarge("too many candidate APs");

  std::vector<std::vector<Option>> options;
  for (int i = 0; i < topo.num_users(); ++i)
    options.push_back(user_options(topo.candidate_aps(i), cfg.k_max, cfg.num_subcarriers));

  AssociationState state = env.reset().association;
  AssociationState best = state;
  double best_utility = -1.0;

  // Depth-first over users; feasibility (f_max, orthogonality) pruned on entry.
  auto recurse = [&](auto&& self, int user) -> void {
    if (user == topo.num_users()) {
      const double u = evaluate_links(topo, state, cfg.radio).network_utility_bps;
      if (u > best_utility) {
        best_utility = u;
        best = state;
      }
      return;
    }
    for (const Option& opt : options[user]) {
      bool ok = true;
      for (int j : opt.aps)
        if (state.load(j) >= cfg.f_max || state.subcarrier_busy(j, opt.subcarrier)) ok = false;
      if (!ok) continue;
      for (int j : opt.aps) {
        state.set_associated(user, j, true);
        state.set_allocated(user, j, opt.subcarrier, true);
      }
      self(self, user + 1);
      for (int j : opt.aps) state.drop_link(user, j);
    }
  };
  recurse(recurse, 0);
  return finish(env, std::move(best));
}

}  // namespace udn
