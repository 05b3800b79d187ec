#include "udn/link_rate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace udn {

const char* to_string(InterferenceMode mode) {
  return mode == InterferenceMode::CoSubcarrier ? "co_subcarrier" : "all";
}

InterferenceMode interference_mode_from_string(const std::string& s) {
  if (s == "co_subcarrier") return InterferenceMode::CoSubcarrier;
  if (s == "all") return InterferenceMode::AllAps;
  throw std::invalid_argument("unknown interference mode '" + s + "'");
}

double sinr(const Topology& topo, const AssociationState& state, int user, int ap,
            int subcarrier, const RadioParams& radio) {
  if (!state.associated(user, ap) || !state.allocated(user, ap, subcarrier))
    throw std::logic_error("sinr queried on an inactive link");

  const double signal = transmit_power(state, ap, radio.ap_power_w) * topo.gain(user, ap);
  double interference = 0.0;
  for (int j = 0; j < state.num_aps(); ++j) {
    if (j == ap) continue;
    bool interferes = false;
    if (radio.mode == InterferenceMode::CoSubcarrier)
      interferes = !state.associated(user, j) && state.subcarrier_busy(j, subcarrier);
    else
      interferes = state.load(j) > 0;
    if (interferes) interference += transmit_power(state, j, radio.ap_power_w) * topo.gain(user, j);
  }
  return signal / (interference + radio.noise_w);
}

double link_capacity(double s, double bandwidth_hz) { return bandwidth_hz * std::log2(1.0 + s); }

LinkMetrics evaluate_links(const Topology& topo, const AssociationState& state,
                           const RadioParams& radio) {
  LinkMetrics out;
  out.user_rate_bps.assign(state.num_users(), 0.0);
  for (int i = 0; i < state.num_users(); ++i) {
    for (int j : state.serving_aps(i)) {
      for (int l = 0; l < state.num_subcarriers(); ++l) {
        if (!state.allocated(i, j, l)) continue;
        const double g = sinr(topo, state, i, j, l, radio);
        const double r = link_capacity(g, radio.bandwidth_hz);
        out.links.push_back({i, j, l, g, r});
        out.user_rate_bps[i] += r;
      }
    }
  }
  out.network_utility_bps = network_utility(out.user_rate_bps);
  return out;
}

std::vector<double> user_rates(const Topology& topo, const AssociationState& state,
                               const RadioParams& radio) {
  return evaluate_links(topo, state, radio).user_rate_bps;
}

double network_utility(std::span<const double> rates) {
  return std::accumulate(rates.begin(), rates.end(), 0.0);
}

}  // namespace udn
