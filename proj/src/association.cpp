#include "udn/association.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace udn {

AssociationState::AssociationState(int num_users, int num_aps, int num_subcarriers, int k_max,
                                   int f_max)
    : num_users_(num_users),
      num_aps_(num_aps),
      num_subcarriers_(num_subcarriers),
      k_max_(k_max),
      f_max_(f_max) {
  if (num_users < 1 || num_aps < 1 || num_subcarriers < 1)
    throw std::invalid_argument("association state needs N, M, L >= 1");
  if (k_max < 1 || f_max < 1) throw std::invalid_argument("k_max and f_max must be >= 1");
  x_.assign(static_cast<std::size_t>(num_users) * num_aps, 0);
  y_.assign(x_.size() * num_subcarriers, 0);
  order_.resize(num_users);
  load_.assign(num_aps, 0);
}

void AssociationState::check(int user, int ap) const {
  if (user < 0 || user >= num_users_ || ap < 0 || ap >= num_aps_)
    throw std::out_of_range("user/AP index out of range");
}

void AssociationState::set_associated(int user, int ap, bool on) {
  check(user, ap);
  auto& cell = x_[xi(user, ap)];
  if ((cell != 0) == on) return;
  cell = on ? 1 : 0;
  auto& order = order_[user];
  if (on) {
    order.push_back(ap);
    ++load_[ap];
  } else {
    order.erase(std::find(order.begin(), order.end(), ap));
    --load_[ap];
  }
}

void AssociationState::set_allocated(int user, int ap, int subcarrier, bool on) {
  check(user, ap);
  if (subcarrier < 0 || subcarrier >= num_subcarriers_)
    throw std::out_of_range("subcarrier index out of range");
  y_[yi(user, ap, subcarrier)] = on ? 1 : 0;
}

std::optional<int> AssociationState::subcarrier_of(int user) const {
  for (int j : order_[user])
    for (int l = 0; l < num_subcarriers_; ++l)
      if (allocated(user, j, l)) return l;
  return std::nullopt;
}

bool AssociationState::subcarrier_busy(int ap, int subcarrier) const {
  for (int i = 0; i < num_users_; ++i)
    if (allocated(i, ap, subcarrier)) return true;
  return false;
}

void AssociationState::drop_link(int user, int ap) {
  for (int l = 0; l < num_subcarriers_; ++l) set_allocated(user, ap, l, false);
  set_associated(user, ap, false);
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (constraint) {
    case Constraint::MaxApsPerUser: os << "user " << user << " exceeds k_max APs"; break;
    case Constraint::MaxUsersPerAp: os << "AP " << ap << " exceeds f_max users"; break;
    case Constraint::CandidateAssociation:
      os << "user " << user << " associated with non-candidate AP " << ap;
      break;
    case Constraint::OneSubcarrierPerLink:
      os << "link user " << user << " / AP " << ap << " holds several subcarriers";
      break;
    case Constraint::OrthogonalOnAp:
      os << "AP " << ap << " subcarrier " << subcarrier << " shared by several users";
      break;
    case Constraint::SameSubcarrierAcrossAps:
      os << "user " << user << " differs on subcarrier " << subcarrier << " at AP " << ap;
      break;
    case Constraint::CandidateAllocation:
      os << "user " << user << " allocated on non-candidate AP " << ap;
      break;
    case Constraint::AllocationNeedsAssociation:
      os << "user " << user << " allocated subcarrier " << subcarrier << " on unassociated AP "
         << ap;
      break;
  }
  return os.str();
}

std::vector<Violation> validate(const AssociationState& s, const Topology& topo) {
  std::vector<Violation> out;
  const int n = s.num_users(), m = s.num_aps(), L = s.num_subcarriers();

  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < m; ++j) count += s.associated(i, j) ? 1 : 0;
    if (count > s.k_max()) out.push_back({Constraint::MaxApsPerUser, i});
  }
  for (int j = 0; j < m; ++j) {
    int count = 0;
    for (int i = 0; i < n; ++i) count += s.associated(i, j) ? 1 : 0;
    if (count > s.f_max()) out.push_back({Constraint::MaxUsersPerAp, -1, j});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const bool candidate = topo.is_candidate(i, j);
      int held = 0;
      for (int l = 0; l < L; ++l) held += s.allocated(i, j, l) ? 1 : 0;
      if (s.associated(i, j) && !candidate)
        out.push_back({Constraint::CandidateAssociation, i, j});
      if (held > 1) out.push_back({Constraint::OneSubcarrierPerLink, i, j});
      if (held > 0 && !candidate) out.push_back({Constraint::CandidateAllocation, i, j});
      for (int l = 0; l < L; ++l)
        if (s.allocated(i, j, l) && !s.associated(i, j))
          out.push_back({Constraint::AllocationNeedsAssociation, i, j, l});
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int l = 0; l < L; ++l) {
      int users = 0;
      for (int i = 0; i < n; ++i) users += s.allocated(i, j, l) ? 1 : 0;
      if (users > 1) out.push_back({Constraint::OrthogonalOnAp, -1, j, l});
    }
  }
  // Compare every associated AP of a user against its first associated AP.
  for (int i = 0; i < n; ++i) {
    int first = -1;
    for (int j = 0; j < m; ++j) {
      if (!s.associated(i, j)) continue;
      if (first < 0) {
        first = j;
        continue;
      }
      for (int l = 0; l < L; ++l)
        if (s.allocated(i, j, l) != s.allocated(i, first, l))
          out.push_back({Constraint::SameSubcarrierAcrossAps, i, j, l});
    }
  }
  return out;
}

const char* to_string(ActionOutcome outcome) {
  switch (outcome) {
    case ActionOutcome::Applied: return "applied";
    case ActionOutcome::RejectedOutOfRange: return "rejected_out_of_range";
    case ActionOutcome::RejectedApFull: return "rejected_ap_full";
  }
  return "unknown";
}

ActionOutcome apply_action(AssociationState& state, int user, const UserAction& action,
                           const Topology& topology) {
  if (user < 0 || user >= state.num_users()) throw std::out_of_range("user index out of range");
  if (action.ap < 0 || action.ap >= state.num_aps())
    throw std::out_of_range("action AP index out of range");
  if (action.subcarrier < 0 || action.subcarrier >= state.num_subcarriers())
    throw std::out_of_range("action subcarrier index out of range");

  const int m = action.ap, l = action.subcarrier;
  if (!topology.is_candidate(user, m)) return ActionOutcome::RejectedOutOfRange;
  const bool already = state.associated(user, m);
  if (!already && state.load(m) >= state.f_max()) return ActionOutcome::RejectedApFull;

  if (!already) {
    state.set_associated(user, m, true);
    if (static_cast<int>(state.serving_aps(user).size()) > state.k_max())
      state.drop_link(user, state.serving_aps(user).front());
  }

  const std::vector<int> aps = state.serving_aps(user);
  for (int j : aps) {
    for (int sub = 0; sub < state.num_subcarriers(); ++sub)
      state.set_allocated(user, j, sub, sub == l);
    for (int other = 0; other < state.num_users(); ++other)
      if (other != user && state.allocated(other, j, l)) state.drop_link(other, j);
  }
  return ActionOutcome::Applied;
}

double transmit_power(const AssociationState& state, int ap, double p_ap_watts) {
  const int n = state.load(ap);
  return n == 0 ? 0.0 : p_ap_watts / n;
}

}  // namespace udn
