#include <doctest.h>

#include <deque>
#include <random>
#include <stdexcept>

#include "support.hpp"
#include "udn/association.hpp"

using namespace udn;
using udn::test::colocated;

TEST_SUITE("association") {

TEST_CASE("flat action index round trip") {
  for (int L = 1; L <= 4; ++L)
    for (int m = 0; m < 5; ++m)
      for (int l = 0; l < L; ++l) {
        const UserAction a{m, l};
        CHECK(a.flat_index(L) == m * L + l);
        CHECK(UserAction::from_flat(a.flat_index(L), L) == a);
      }
}

TEST_CASE("empty state is valid") {
  const Topology t = colocated(2, 2, {1, 1, 1, 1});
  CHECK(validate(AssociationState(2, 2, 2, 1, 1), t).empty());
}

TEST_CASE("user on k_max + 1 APs is reported") {
  const Topology t = colocated(1, 3, {1, 1, 1});
  AssociationState s(1, 3, 1, 2, 4);
  for (int j = 0; j < 3; ++j) s.set_associated(0, j, true);
  const auto v = validate(s, t);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == Constraint::MaxApsPerUser);
  CHECK(v[0].user == 0);
  CHECK_FALSE(v[0].describe().empty());
}

TEST_CASE("each constraint family is detected") {
  // AP 1 is out of range for user 0.
  const Topology t = test::make_topology({{0, 0}, {100, 0}}, {{0, 0}, {0, 0}, {0, 0}}, 10.0,
                                         std::vector<double>(6, 1.0));
  SUBCASE("max users per AP") {
    AssociationState s(3, 2, 2, 2, 2);
    for (int i = 0; i < 3; ++i) s.set_associated(i, 0, true);
    CHECK(validate(s, t).front().constraint == Constraint::MaxUsersPerAp);
  }
  SUBCASE("candidate association and allocation") {
    AssociationState s(3, 2, 2, 2, 2);
    s.set_associated(0, 1, true);
    s.set_allocated(0, 1, 0, true);
    const auto f = test::as_findings(validate(s, t));
    CHECK(f.contains({static_cast<int>(Constraint::CandidateAssociation), 0, 1, -1}));
    CHECK(f.contains({static_cast<int>(Constraint::CandidateAllocation), 0, 1, -1}));
  }
  SUBCASE("one subcarrier per link") {
    AssociationState s(3, 2, 2, 2, 2);
    s.set_associated(0, 0, true);
    s.set_allocated(0, 0, 0, true);
    s.set_allocated(0, 0, 1, true);
    CHECK(validate(s, t).front().constraint == Constraint::OneSubcarrierPerLink);
  }
  SUBCASE("orthogonality on an AP") {
    AssociationState s(3, 2, 2, 2, 2);
    s.set_associated(0, 0, true);
    s.set_associated(1, 0, true);
    s.set_allocated(0, 0, 1, true);
    s.set_allocated(1, 0, 1, true);
    const auto v = validate(s, t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].constraint == Constraint::OrthogonalOnAp);
    CHECK(v[0].ap == 0);
    CHECK(v[0].subcarrier == 1);
  }
  SUBCASE("allocation requires association") {
    AssociationState s(3, 2, 2, 2, 2);
    s.set_allocated(2, 0, 0, true);
    const auto v = validate(s, t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].constraint == Constraint::AllocationNeedsAssociation);
  }
}

TEST_CASE("same subcarrier across serving APs") {
  const Topology t = colocated(1, 2, {1, 1});
  AssociationState s(1, 2, 2, 2, 2);
  s.set_associated(0, 0, true);
  s.set_associated(0, 1, true);
  s.set_allocated(0, 0, 0, true);
  s.set_allocated(0, 1, 1, true);
  const auto v = validate(s, t);
  CHECK_FALSE(v.empty());
  for (const auto& x : v) CHECK(x.constraint == Constraint::SameSubcarrierAcrossAps);
}

TEST_CASE("validate matches the set-arithmetic oracle on random states") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const Topology t = test::random_topology(3, 3, rng);
    const AssociationState s = test::random_raw_state(3, 3, 2, 1 + trial % 3, 1 + trial % 2, rng);
    CHECK(test::as_findings(validate(s, t)) == test::constraint_oracle(s, t));
  }
}

TEST_CASE("insert into an empty AP") {
  const Topology t = colocated(2, 3, std::vector<double>(6, 1.0));
  AssociationState s(2, 3, 2, 4, 4);
  CHECK(apply_action(s, 0, {1, 0}, t) == ActionOutcome::Applied);
  CHECK(s.associated(0, 1));
  CHECK(s.allocated(0, 1, 0));
  CHECK(s.load(1) == 1);
  CHECK(s.subcarrier_of(0) == 0);
  CHECK(validate(s, t).empty());
}

TEST_CASE("full AP rejects a new user") {
  const Topology t = colocated(3, 1, {1, 1, 1});
  AssociationState s(3, 1, 4, 1, 2);
  REQUIRE(apply_action(s, 0, {0, 0}, t) == ActionOutcome::Applied);
  REQUIRE(apply_action(s, 1, {0, 1}, t) == ActionOutcome::Applied);
  const AssociationState before = s;
  CHECK(apply_action(s, 2, {0, 2}, t) == ActionOutcome::RejectedApFull);
  CHECK(s == before);
  // An already-associated user can still move subcarrier on a full AP.
  CHECK(apply_action(s, 1, {0, 3}, t) == ActionOutcome::Applied);
  CHECK(s.allocated(1, 0, 3));
}

TEST_CASE("out-of-range AP is a no-op") {
  const Topology t = test::make_topology({{0, 0}, {100, 0}}, {{0, 0}}, 10.0, {1, 1});
  AssociationState s(1, 2, 1, 2, 2);
  CHECK(apply_action(s, 0, {1, 0}, t) == ActionOutcome::RejectedOutOfRange);
  CHECK(s == AssociationState(1, 2, 1, 2, 2));
}

TEST_CASE("bad indices throw") {
  const Topology t = colocated(1, 1, {1});
  AssociationState s(1, 1, 1, 1, 1);
  CHECK_THROWS_AS(apply_action(s, 1, {0, 0}, t), std::out_of_range);
  CHECK_THROWS_AS(apply_action(s, 0, {1, 0}, t), std::out_of_range);
  CHECK_THROWS_AS(apply_action(s, 0, {0, -1}, t), std::out_of_range);
  CHECK_THROWS_AS(s.set_associated(0, 2, true), std::out_of_range);
  CHECK_THROWS_AS(AssociationState(0, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(AssociationState(1, 1, 1, 0, 1), std::invalid_argument);
}

TEST_CASE("k_max + 1 distinct APs evicts the oldest") {
  const Topology t = colocated(1, 4, {1, 1, 1, 1});
  AssociationState s(1, 4, 2, 3, 4);
  for (int j = 0; j < 4; ++j) apply_action(s, 0, {j, 1}, t);
  CHECK(s.serving_aps(0) == std::vector<int>{1, 2, 3});
  CHECK_FALSE(s.associated(0, 0));
  CHECK_FALSE(s.allocated(0, 0, 1));
  CHECK(validate(s, t).empty());
}

TEST_CASE("association order follows a FIFO reference model") {
  std::mt19937_64 rng(77);
  const Topology t = colocated(1, 5, std::vector<double>(5, 1.0));
  for (int k = 1; k <= 4; ++k) {
    AssociationState s(1, 5, 2, k, 4);
    std::deque<int> model;
    std::uniform_int_distribution<int> ap(0, 4), sub(0, 1);
    for (int step = 0; step < 200; ++step) {
      const int j = ap(rng);
      apply_action(s, 0, {j, sub(rng)}, t);
      if (std::find(model.begin(), model.end(), j) == model.end()) {
        model.push_back(j);
        if (static_cast<int>(model.size()) > k) model.pop_front();
      }
      CHECK(s.serving_aps(0) == std::vector<int>(model.begin(), model.end()));
    }
  }
}

TEST_CASE("later claimant displaces the conflicting link") {
  const Topology t = colocated(2, 2, {1, 1, 1, 1});
  AssociationState s(2, 2, 2, 2, 2);
  apply_action(s, 0, {0, 0}, t);
  apply_action(s, 0, {1, 0}, t);
  apply_action(s, 1, {1, 0}, t);
  CHECK(s.associated(1, 1));
  CHECK(s.allocated(1, 1, 0));
  // User 0 loses its link on AP 1 only.
  CHECK_FALSE(s.associated(0, 1));
  CHECK(s.associated(0, 0));
  CHECK(s.allocated(0, 0, 0));
  CHECK(validate(s, t).empty());
}

TEST_CASE("switching subcarrier moves every serving link") {
  const Topology t = colocated(1, 3, {1, 1, 1});
  AssociationState s(1, 3, 3, 3, 3);
  apply_action(s, 0, {0, 0}, t);
  apply_action(s, 0, {1, 1}, t);
  apply_action(s, 0, {2, 2}, t);
  for (int j = 0; j < 3; ++j) {
    CHECK(s.allocated(0, j, 2));
    CHECK_FALSE(s.allocated(0, j, 0));
  }
  CHECK(s.subcarrier_of(0) == 2);
}

TEST_CASE("reachable states always validate") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4, m = 1 + (trial / 4) % 4, L = 1 + trial % 3;
    const Topology t = test::random_topology(n, m, rng);
    AssociationState s(n, m, L, 1 + trial % 3, 1 + trial % 2);
    std::uniform_int_distribution<int> u(0, n - 1), a(0, m - 1), l(0, L - 1);
    for (int step = 0; step < 40; ++step) {
      apply_action(s, u(rng), {a(rng), l(rng)}, t);
      REQUIRE(validate(s, t).empty());
      for (int i = 0; i < n; ++i) CHECK(static_cast<int>(s.serving_aps(i).size()) <= s.k_max());
    }
  }
}

TEST_CASE("applying the same action twice equals applying it once") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const Topology t = test::random_topology(3, 3, rng);
    AssociationState s = test::random_reachable_state(t, 2, 2, 2, 10, rng);
    std::uniform_int_distribution<int> u(0, 2), a(0, 2), l(0, 1);
    const int user = u(rng);
    const UserAction act{a(rng), l(rng)};
    AssociationState once = s;
    apply_action(once, user, act, t);
    AssociationState twice = once;
    apply_action(twice, user, act, t);
    CHECK(once == twice);
  }
}

TEST_CASE("transmit power splits equally") {
  const Topology t = colocated(4, 1, {1, 1, 1, 1});
  AssociationState s(4, 1, 4, 1, 4);
  CHECK(transmit_power(s, 0, 0.2) == 0.0);
  apply_action(s, 0, {0, 0}, t);
  CHECK(transmit_power(s, 0, 0.2) == doctest::Approx(0.2));
  for (int i = 1; i < 4; ++i) apply_action(s, i, {0, i}, t);
  CHECK(transmit_power(s, 0, 0.2) == doctest::Approx(0.05));
  CHECK(transmit_power(s, 0, 0.19952623149688797) == doctest::Approx(0.0498815578742));
}

TEST_CASE("outcome names") {
  CHECK(std::string(to_string(ActionOutcome::Applied)) == "applied");
  CHECK(std::string(to_string(ActionOutcome::RejectedApFull)) == "rejected_ap_full");
  CHECK(std::string(to_string(ActionOutcome::RejectedOutOfRange)) == "rejected_out_of_range");
}

}
