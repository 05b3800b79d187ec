// Shared fixtures and independent oracles for the test binaries.
#pragma once

#include <cmath>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "udn/association.hpp"
#include "udn/geometry.hpp"
#include "udn/link_rate.hpp"

namespace udn::test {

/// Topology with explicit row-major N x M gains; candidacy follows the
/// positions and radius.
inline Topology make_topology(std::vector<Point> aps, std::vector<Point> users, double radius,
                              std::vector<double> gains) {
  return Topology(std::move(aps), std::move(users), 100.0, radius, std::move(gains));
}

/// N users and M APs all at the same point: every link is a candidate.
inline Topology colocated(int n, int m, std::vector<double> gains) {
  return make_topology(std::vector<Point>(m, {1.0, 1.0}), std::vector<Point>(n, {1.0, 1.0}), 15.0,
                       std::move(gains));
}

/// APs 10 m apart on a line, users uniform along it, 7 m radius: every user
/// has one or two candidates. Gains are drawn independently of geometry,
/// log-uniform in [1e-10, 1e-6].
inline Topology random_topology(int n, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> aps;
  for (int j = 0; j < m; ++j) aps.push_back({10.0 * j, 0.0});
  std::vector<Point> users;
  for (int i = 0; i < n; ++i) users.push_back({10.0 * (m - 1) * u(rng), 0.0});
  std::vector<double> gains;
  for (int k = 0; k < n * m; ++k) gains.push_back(std::pow(10.0, -10.0 + 4.0 * u(rng)));
  return make_topology(std::move(aps), std::move(users), 7.0, std::move(gains));
}

/// Arbitrary (possibly invalid) x, y of the given shape.
inline AssociationState random_raw_state(int n, int m, int L, int k, int f, std::mt19937_64& rng,
                                         double density = 0.35) {
  std::bernoulli_distribution bit(density);
  AssociationState s(n, m, L, k, f);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      if (bit(rng)) s.set_associated(i, j, true);
      for (int l = 0; l < L; ++l)
        if (bit(rng)) s.set_allocated(i, j, l, true);
    }
  return s;
}

/// State reached by a random action sequence through the projection.
inline AssociationState random_reachable_state(const Topology& topo, int L, int k, int f,
                                               int actions, std::mt19937_64& rng) {
  AssociationState s(topo.num_users(), topo.num_aps(), L, k, f);
  std::uniform_int_distribution<int> user(0, topo.num_users() - 1);
  std::uniform_int_distribution<int> ap(0, topo.num_aps() - 1);
  std::uniform_int_distribution<int> sub(0, L - 1);
  for (int t = 0; t < actions; ++t) apply_action(s, user(rng), {ap(rng), sub(rng)}, topo);
  return s;
}

/// Constraint verdict computed from set arithmetic on index triples: returns
/// the set of violated families, keyed by (family, user, ap, subcarrier).
using Finding = std::tuple<int, int, int, int>;

inline std::set<Finding> constraint_oracle(const AssociationState& s, const Topology& topo) {
  const int n = s.num_users(), m = s.num_aps(), L = s.num_subcarriers();
  std::set<std::pair<int, int>> X;               // (i, j)
  std::set<std::tuple<int, int, int>> Y;         // (i, j, l)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      if (s.associated(i, j)) X.insert({i, j});
      for (int l = 0; l < L; ++l)
        if (s.allocated(i, j, l)) Y.insert({i, j, l});
    }
  std::set<Finding> out;
  auto family = [](Constraint c) { return static_cast<int>(c); };
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (auto [a, b] : X) deg += a == i;
    if (deg > s.k_max()) out.insert({family(Constraint::MaxApsPerUser), i, -1, -1});
  }
  for (int j = 0; j < m; ++j) {
    int deg = 0;
    for (auto [a, b] : X) deg += b == j;
    if (deg > s.f_max()) out.insert({family(Constraint::MaxUsersPerAp), -1, j, -1});
  }
  for (auto [i, j] : X)
    if (!topo.is_candidate(i, j)) out.insert({family(Constraint::CandidateAssociation), i, j, -1});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      std::set<int> subs;
      for (auto [a, b, l] : Y)
        if (a == i && b == j) subs.insert(l);
      if (subs.size() > 1) out.insert({family(Constraint::OneSubcarrierPerLink), i, j, -1});
      if (!subs.empty() && !topo.is_candidate(i, j))
        out.insert({family(Constraint::CandidateAllocation), i, j, -1});
    }
  for (auto [i, j, l] : Y)
    if (!X.contains({i, j})) out.insert({family(Constraint::AllocationNeedsAssociation), i, j, l});
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < L; ++l) {
      std::set<int> users;
      for (auto [a, b, c] : Y)
        if (b == j && c == l) users.insert(a);
      if (users.size() > 1) out.insert({family(Constraint::OrthogonalOnAp), -1, j, l});
    }
  // Every pair of associated APs of a user must hold identical subcarrier sets.
  for (int i = 0; i < n; ++i) {
    std::vector<int> served;
    for (auto [a, b] : X)
      if (a == i) served.push_back(b);
    if (served.size() < 2) continue;
    const int ref = served.front();
    for (std::size_t t = 1; t < served.size(); ++t)
      for (int l = 0; l < L; ++l)
        if (Y.contains({i, served[t], l}) != Y.contains({i, ref, l}))
          out.insert({family(Constraint::SameSubcarrierAcrossAps), i, served[t], l});
  }
  return out;
}

inline std::set<Finding> as_findings(const std::vector<Violation>& v) {
  std::set<Finding> out;
  for (const auto& x : v) out.insert({static_cast<int>(x.constraint), x.user, x.ap, x.subcarrier});
  return out;
}

/// Per-user rate by a direct triple loop over (user, AP, subcarrier), testing
/// every other AP's subcarrier occupancy for interference.
inline std::vector<double> rate_oracle(const Topology& topo, const AssociationState& s,
                                       const RadioParams& radio) {
  const int n = s.num_users(), m = s.num_aps(), L = s.num_subcarriers();
  std::vector<int> load(m, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) load[j] += s.associated(i, j) ? 1 : 0;
  auto power = [&](int j) { return load[j] > 0 ? radio.ap_power_w / load[j] : 0.0; };

  std::vector<double> rates(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < L; ++l) {
        if (!(s.associated(i, j) && s.allocated(i, j, l))) continue;
        double interference = 0.0;
        for (int jp = 0; jp < m; ++jp) {
          if (jp == j) continue;
          bool on = false;
          if (radio.mode == InterferenceMode::AllAps) {
            on = load[jp] > 0;
          } else {
            bool busy = false;
            for (int ip = 0; ip < n; ++ip) busy = busy || s.allocated(ip, jp, l);
            on = busy && !s.associated(i, jp);
          }
          if (on) interference += power(jp) * topo.gain(i, jp);
        }
        const double sinr = power(j) * topo.gain(i, j) / (interference + radio.noise_w);
        rates[i] += radio.bandwidth_hz * std::log2(1.0 + sinr);
      }
  return rates;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace udn::test
