// User-AP association matrix x and subcarrier allocation tensor y.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udn/geometry.hpp"

namespace udn {

/// One agent's per-step choice: an AP and a subcarrier (0-based).
struct UserAction {
  int ap = 0;
  int subcarrier = 0;

  /// One-hot position in the M*L action space: ap * L + subcarrier.
  int flat_index(int num_subcarriers) const { return ap * num_subcarriers + subcarrier; }
  static UserAction from_flat(int index, int num_subcarriers) {
    return {index / num_subcarriers, index % num_subcarriers};
  }
  friend bool operator==(const UserAction&, const UserAction&) = default;
};

/// Binary x (N x M) and y (N x M x L) plus per-user FIFO association order.
///
/// The raw setters allow building arbitrary (possibly invalid) states for
/// checking; apply_action only ever produces states that pass validate().
class AssociationState {
 public:
  AssociationState(int num_users, int num_aps, int num_subcarriers, int k_max, int f_max);

  int num_users() const { return num_users_; }
  int num_aps() const { return num_aps_; }
  int num_subcarriers() const { return num_subcarriers_; }
  int k_max() const { return k_max_; }
  int f_max() const { return f_max_; }

  bool associated(int user, int ap) const { return x_[xi(user, ap)] != 0; }
  bool allocated(int user, int ap, int subcarrier) const { return y_[yi(user, ap, subcarrier)] != 0; }

  void set_associated(int user, int ap, bool on);
  void set_allocated(int user, int ap, int subcarrier, bool on);

  /// APs serving `user`, oldest association first.
  const std::vector<int>& serving_aps(int user) const { return order_[user]; }
  /// n_j = number of users associated with AP j.
  int load(int ap) const { return load_[ap]; }
  /// Subcarrier of the user's first allocated link, if any.
  std::optional<int> subcarrier_of(int user) const;
  /// Whether any user is allocated subcarrier l on AP j.
  bool subcarrier_busy(int ap, int subcarrier) const;

  /// Removes the association and every allocation of the (user, ap) link.
  void drop_link(int user, int ap);

  friend bool operator==(const AssociationState& a, const AssociationState& b) {
    return a.num_users_ == b.num_users_ && a.num_aps_ == b.num_aps_ &&
           a.num_subcarriers_ == b.num_subcarriers_ && a.k_max_ == b.k_max_ &&
           a.f_max_ == b.f_max_ && a.x_ == b.x_ && a.y_ == b.y_ && a.order_ == b.order_;
  }

 private:
  std::size_t xi(int user, int ap) const {
    return static_cast<std::size_t>(user) * num_aps_ + static_cast<std::size_t>(ap);
  }
  std::size_t yi(int user, int ap, int l) const { return xi(user, ap) * num_subcarriers_ + l; }
  void check(int user, int ap) const;

  int num_users_;
  int num_aps_;
  int num_subcarriers_;
  int k_max_;
  int f_max_;
  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> y_;
  std::vector<std::vector<int>> order_;
  std::vector<int> load_;
};

/// Constraint families over (x, y).
enum class Constraint {
  MaxApsPerUser,
  MaxUsersPerAp,
  CandidateAssociation,
  OneSubcarrierPerLink,
  OrthogonalOnAp,
  SameSubcarrierAcrossAps,
  CandidateAllocation,
  AllocationNeedsAssociation,
};

struct Violation {
  Constraint constraint;
  int user = -1;
  int ap = -1;
  int subcarrier = -1;

  std::string describe() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every violated constraint instance; empty iff the state is feasible.
std::vector<Violation> validate(const AssociationState& state, const Topology& topology);

enum class ActionOutcome { Applied, RejectedOutOfRange, RejectedApFull };

const char* to_string(ActionOutcome outcome);

/// Projects one user action onto the feasible set.
///
///  - AP outside S_user: no-op, RejectedOutOfRange.
///  - AP already serving f_max other users: no-op, RejectedApFull.
///  - Otherwise the user joins the AP (oldest AP evicted past k_max), moves all
///    of its links to the chosen subcarrier, and displaces any other user's
///    link that holds that subcarrier on one of its APs.
///
/// Throws std::out_of_range for indices outside the state dimensions.
ActionOutcome apply_action(AssociationState& state, int user, const UserAction& action,
                           const Topology& topology);

/// P_ap / n_j, or 0 for an idle AP.
double transmit_power(const AssociationState& state, int ap, double p_ap_watts);

}  // namespace udn
