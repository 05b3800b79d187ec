// Non-learning reference policies and the exhaustive one-shot oracle.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "udn/association.hpp"
#include "udn/env.hpp"

namespace udn {

struct PolicyVerdict {
  AssociationState state;
  std::vector<double> user_rate_bps;
  double utility_bps = 0.0;
};

/// Each user, in index order, joins up to k non-full candidate APs ranked by
/// RSRP = (P_ap / (n_j + 1)) * G_ij, then draws one subcarrier uniformly.
PolicyVerdict max_rsrp_policy(const Environment& env, std::mt19937_64& rng);

/// Each user, in index order, takes one uniformly random action among those
/// that would not be rejected (skipped if none exist).
PolicyVerdict random_policy(const Environment& env, std::mt19937_64& rng);

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-user options count product; the oracle refuses above this.
inline constexpr double kDefaultSearchLimit = 1e7;

/// Enumerates every feasible joint assignment (each user: a set of at most k
/// candidate APs sharing one subcarrier, or nothing) and returns the best.
/// Throws SearchSpaceTooLarge when the raw product exceeds `limit`.
PolicyVerdict brute_force_optimum(const Environment& env, double limit = kDefaultSearchLimit);

/// Size of the raw search space brute_force_optimum would enumerate.
double brute_force_space_size(const Environment& env);

}  // namespace udn
