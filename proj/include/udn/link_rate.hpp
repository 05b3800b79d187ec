// SINR, Shannon capacity, per-user rate and network utility.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "udn/association.hpp"
#include "udn/geometry.hpp"

namespace udn {

enum class InterferenceMode {
  /// Only APs transmitting on the same subcarrier interfere; every AP that
  /// serves the receiving user is a signal source, never an interferer.
  CoSubcarrier,
  /// Every other active AP interferes regardless of subcarrier.
  AllAps,
};

const char* to_string(InterferenceMode mode);
InterferenceMode interference_mode_from_string(const std::string& s);

struct RadioParams {
  double ap_power_w = 0.19952623149688797;  // 23 dBm
  double noise_w = 7.1614341021536e-16;     // -174 dBm/Hz over 180 kHz
  double bandwidth_hz = 180e3;
  InterferenceMode mode = InterferenceMode::CoSubcarrier;
};

/// SINR of the active (user, ap, subcarrier) link. Throws std::logic_error if
/// the link is not both associated and allocated.
double sinr(const Topology& topology, const AssociationState& state, int user, int ap,
            int subcarrier, const RadioParams& radio);

/// W log2(1 + sinr).
double link_capacity(double sinr, double bandwidth_hz);

/// r_i for every user: sum of capacities over its active links; 0 if none.
std::vector<double> user_rates(const Topology& topology, const AssociationState& state,
                               const RadioParams& radio);

/// Linear utility summed over users.
double network_utility(std::span<const double> rates);

struct ActiveLink {
  int user;
  int ap;
  int subcarrier;
  double sinr;
  double rate_bps;
};

struct LinkMetrics {
  std::vector<ActiveLink> links;
  std::vector<double> user_rate_bps;
  double network_utility_bps = 0.0;
};

LinkMetrics evaluate_links(const Topology& topology, const AssociationState& state,
                           const RadioParams& radio);

}  // namespace udn
