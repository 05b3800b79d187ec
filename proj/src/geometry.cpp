#include "udn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace udn {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void ChannelParams::validate() const {
  for (const auto* p : {&los, &nlos}) {
    if (!(p->beta > 0.0)) throw std::invalid_argument("pathloss beta must be > 0");
    if (!(p->sigma >= 0.0)) throw std::invalid_argument("shadowing sigma must be >= 0");
  }
  if (!(los_probability >= 0.0 && los_probability <= 1.0))
    throw std::invalid_argument("los_probability must lie in [0, 1]");
  if (!(min_distance_m > 0.0)) throw std::invalid_argument("min_distance_m must be > 0");
}

Topology::Topology(std::vector<Point> aps, std::vector<Point> users, double area_side,
                   double coverage_radius, std::vector<double> gains)
    : aps_(std::move(aps)),
      users_(std::move(users)),
      area_side_(area_side),
      radius_(coverage_radius),
      gains_(std::move(gains)) {
  if (aps_.empty() || users_.empty()) throw std::invalid_argument("topology needs >= 1 AP and user");
  if (gains_.size() != aps_.size() * users_.size())
    throw std::invalid_argument("gain matrix must be N x M");
  candidate_aps_.resize(users_.size());
  candidate_users_.resize(aps_.size());
  for (int i = 0; i < num_users(); ++i) {
    for (int j = 0; j < num_aps(); ++j) {
      if (distance(users_[i], aps_[j]) <= radius_) {
        candidate_aps_[i].push_back(j);
        candidate_users_[j].push_back(i);
      }
    }
  }
}

bool Topology::is_candidate(int user, int ap) const {
  const auto& s = candidate_aps_[user];
  for (int j : s)
    if (j == ap) return true;
  return false;
}

double pathloss_db(double distance_m, const PathlossParams& params, double shadow_db) {
  if (!(distance_m > 0.0))
    throw std::invalid_argument("pathloss distance must be > 0, got " + std::to_string(distance_m));
  return params.alpha + 10.0 * params.beta * std::log10(distance_m) + shadow_db;
}

double channel_gain(double pathloss, double antenna_gain_dbi) {
  return std::pow(10.0, (antenna_gain_dbi - pathloss) / 10.0);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double noise_power(double density_dbm_per_hz, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  return dbm_to_watts(density_dbm_per_hz + 10.0 * std::log10(bandwidth_hz));
}

namespace {

bool has_candidate(const Point& user, const std::vector<Point>& aps, double radius) {
  for (const auto& ap : aps)
    if (distance(user, ap) <= radius) return true;
  return false;
}

}  // namespace

Topology generate_topology(const DropParams& drop, const ChannelParams& channel,
                           std::uint64_t seed) {
  if (drop.num_aps < 1 || drop.num_users < 1)
    throw std::invalid_argument("need at least one AP and one user");
  if (!(drop.area_side_m > 0.0)) throw std::invalid_argument("area side must be > 0");
  if (!(drop.coverage_radius_m > 0.0)) throw std::invalid_argument("coverage radius must be > 0");
  channel.validate();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, drop.area_side_m);
  auto draw = [&] { return Point{coord(rng), coord(rng)}; };

  std::vector<Point> aps(static_cast<std::size_t>(drop.num_aps));
  for (auto& p : aps) p = draw();

  std::vector<Point> users(static_cast<std::size_t>(drop.num_users));
  for (std::size_t i = 0; i < users.size(); ++i) {
    int tries = 0;
    users[i] = draw();
    while (!has_candidate(users[i], aps, drop.coverage_radius_m)) {
      if (++tries > drop.max_redrops)
        throw std::runtime_error("user " + std::to_string(i) + " has no AP within " +
                                 std::to_string(drop.coverage_radius_m) + " m after " +
                                 std::to_string(drop.max_redrops) + " re-drops");
      users[i] = draw();
    }
  }

  std::bernoulli_distribution los(channel.los_probability);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::vector<double> gains;
  gains.reserve(users.size() * aps.size());
  for (const auto& u : users) {
    for (const auto& a : aps) {
      const PathlossParams& pl = los(rng) ? channel.los : channel.nlos;
      const double shadow = pl.sigma * unit_normal(rng);
      const double d = std::max(distance(u, a), channel.min_distance_m);
      gains.push_back(channel_gain(pathloss_db(d, pl, shadow), channel.antenna_gain_dbi));
    }
  }
  return Topology(std::move(aps), std::move(users), drop.area_side_m, drop.coverage_radius_m,
                  std::move(gains));
}

}  // namespace udn
