// Drop generation and the mmWave link budget.
#pragma once

#include <cstdint>
#include <vector>

namespace udn {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Log-distance pathloss with log-normal shadowing:
///   PL = alpha + 10 beta log10(d) + xi,  xi ~ N(0, sigma^2)  [dB, d in meters]
struct PathlossParams {
  double alpha = 0.0;
  double beta = 2.0;
  double sigma = 0.0;
};

inline constexpr PathlossParams kLosPathloss{61.4, 2.0, 5.8};
inline constexpr PathlossParams kNlosPathloss{72.0, 2.92, 8.7};

/// Everything needed to draw a topology. Defaults are the 50 m x 50 m,
/// 10 AP, 15 m radius scenario.
struct ChannelParams {
  PathlossParams los = kLosPathloss;
  PathlossParams nlos = kNlosPathloss;
  double los_probability = 0.5;
  double antenna_gain_dbi = 5.0;
  double min_distance_m = 0.1;

  void validate() const;
};

struct DropParams {
  int num_aps = 10;
  int num_users = 10;
  double area_side_m = 50.0;
  double coverage_radius_m = 15.0;
  int max_redrops = 1000;
};

/// One drop: positions, candidate sets and the frozen N x M gain matrix.
/// Gains are flat across subcarriers.
class Topology {
 public:
  Topology(std::vector<Point> aps, std::vector<Point> users, double area_side,
           double coverage_radius, std::vector<double> gains);

  int num_aps() const { return static_cast<int>(aps_.size()); }
  int num_users() const { return static_cast<int>(users_.size()); }
  double area_side() const { return area_side_; }
  double coverage_radius() const { return radius_; }

  const std::vector<Point>& ap_positions() const { return aps_; }
  const std::vector<Point>& user_positions() const { return users_; }

  /// Linear power gain between user i and AP j.
  double gain(int user, int ap) const {
    return gains_[static_cast<std::size_t>(user) * aps_.size() + static_cast<std::size_t>(ap)];
  }
  const std::vector<double>& gains() const { return gains_; }

  bool is_candidate(int user, int ap) const;
  /// S_i, ascending AP indices.
  const std::vector<int>& candidate_aps(int user) const { return candidate_aps_[user]; }
  /// U_j, ascending user indices.
  const std::vector<int>& candidate_users(int ap) const { return candidate_users_[ap]; }

 private:
  std::vector<Point> aps_;
  std::vector<Point> users_;
  double area_side_;
  double radius_;
  std::vector<double> gains_;
  std::vector<std::vector<int>> candidate_aps_;
  std::vector<std::vector<int>> candidate_users_;
};

/// alpha + 10 beta log10(d) + shadow_db. Throws std::invalid_argument for d <= 0.
double pathloss_db(double distance_m, const PathlossParams& params, double shadow_db);

/// 10^((antenna_gain - pathloss) / 10).
double channel_gain(double pathloss_db, double antenna_gain_dbi);

/// Thermal noise over `bandwidth_hz` for a density in dBm/Hz, in watts.
double noise_power(double density_dbm_per_hz, double bandwidth_hz);

double dbm_to_watts(double dbm);

/// Places APs and users uniformly in the square and freezes per-link LOS state
/// and shadowing. Users with no AP within the radius are re-dropped; throws
/// std::runtime_error when that does not succeed within `max_redrops` tries.
Topology generate_topology(const DropParams& drop, const ChannelParams& channel,
                           std::uint64_t seed);

}  // namespace udn
