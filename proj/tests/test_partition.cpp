#include "mcid/fixtures.hpp"
#include "mcid/oracle.hpp"
#include "mcid/partition.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <algorithm>

using namespace mcid;
using doctest::Approx;

TEST_CASE("extract_component on the worked examples") {
  const double beta = 0.05;
  SUBCASE("tight block chain returns one block without inner splits") {
    const auto r = extract_component(ref::block4_tight(), StateSubset::empty(4), beta, 3);
    REQUIRE(r.component);
    CHECK((*r.component == StateSubset({0, 1}, 4) || *r.component == StateSubset({2, 3}, 4)));
    CHECK_FALSE(r.used_fallback);
    CHECK(r.inner_iterations == 0);
    CHECK(r.inner_threshold == Approx(beta / (8.0 * std::log(4.0))));
  }
  SUBCASE("uniform chain falls back to the whole space") {
    const auto r = extract_component(ref::uniform(4), StateSubset::empty(4), beta, 3);
    REQUIRE(r.component);
    CHECK(r.component->is_full());
    CHECK(r.used_fallback);
    CHECK(r.inner_iterations == 0);
  }
  SUBCASE("leaky remainder yields no component") {
    const StateSubset T({0, 1}, 4);
    const auto r = extract_component(ref::uniform(4), T, beta, 3);
    CHECK_FALSE(r.component);
    CHECK(internal_mass_ratio(ref::uniform(4), T.complement()) <= 1.0 - beta / 8.0);
    for (unsigned long long mask : {0b0100ULL, 0b1000ULL, 0b1100ULL})
      CHECK(expansion(ref::uniform(4), StateSubset::from_mask(mask, 4)) >= r.claim3_floor);
  }
  SUBCASE("T covering everything returns immediately") {
    CHECK_FALSE(extract_component(ref::uniform(4), StateSubset::full(4), beta, 3).component);
  }
  CHECK_THROWS(extract_component(ref::uniform(4), StateSubset::empty(4), 0.0, 3));
  CHECK_THROWS(extract_component(ref::uniform(4), StateSubset::empty(4), 1.0, 3));
}

TEST_CASE("inner loop measures sub-cuts inside the current set, not against all of P") {
  // First cut {0,1,4,5} avoids T = {2}. Its sub-cut {4,5} | {0,1} carries 0.047 across,
  // so the in-set expansion is 0.0235, below beta / (8 ln 6) = 0.0349: split and keep {4,5}.
  // Measured against all of P the same cut also counts 0.027 leaking to {2,3} (0.037),
  // which would stop the loop at {0,1,4,5}.
  const auto p = ref::inner_loop_witness();
  const StateSubset T({2}, 6);
  const double beta = 0.5;
  const StateSubset piece({4, 5}, 6), rest({0, 1}, 6);
  double across = 0.0;
  for (State i : piece)
    for (State j : rest) across += p(i, j);
  CHECK(across / 2.0 == Approx(0.0235));
  CHECK(expansion(p, piece) == Approx(0.037));
  CHECK(beta / (8.0 * std::log(6.0)) == Approx(0.0348819).epsilon(1e-5));

  const auto in_set = extract_component(p, T, beta, 7);
  const auto full = extract_component_full_measure(p, T, beta, 7);
  REQUIRE(in_set.component);
  REQUIRE(full.component);
  CHECK(*in_set.component == piece);
  CHECK(in_set.inner_iterations == 1);
  CHECK(*full.component == StateSubset({0, 1, 4, 5}, 6));
  CHECK(full.inner_iterations == 0);
}

TEST_CASE("partition_graph worked examples") {
  SUBCASE("tight block chain") {
    const auto part = partition_graph(ref::block4_tight(), 0.05, 9);
    REQUIRE(part.high_info.size() == 2);
    CHECK(part.high_info[0].unite(part.high_info[1]).is_full());
    for (const auto& s : part.high_info)
      CHECK((s == StateSubset({0, 1}, 4) || s == StateSubset({2, 3}, 4)));
    CHECK(part.low_info.empty());
  }
  SUBCASE("uniform chain") {
    const auto part = partition_graph(ref::uniform(4), 0.05, 9);
    REQUIRE(part.high_info.size() == 1);
    CHECK(part.high_info[0].is_full());
    CHECK(part.low_info.empty());
  }
  SUBCASE("three regions: no block is split") {
    const auto p = fixtures::three_region_chain(3, 3, 0.005);
    const double beta = 0.05;
    const auto part = partition_graph(p, beta, 9);
    CHECK_NOTHROW(part.validate(9));
    for (const StateSubset& block : {StateSubset({0, 1, 2}, 9), StateSubset({3, 4, 5}, 9)}) {
      const auto holder = std::count_if(part.high_info.begin(), part.high_info.end(),
                                        [&](const StateSubset& s) { return block.subset_of(s); });
      CHECK(holder == 1);
    }
    for (std::size_t k = 0; k < part.high_info.size(); ++k) {
      CHECK(internal_mass_ratio(p, part.high_info[k]) >= 1.0 - beta);
      CHECK(oracle::min_internal_expansion_exact(p, part.high_info[k]) >= part.claim2_floors[k]);
    }
    CHECK(part.claim3_floor > 0.0);
    CHECK(oracle::low_info_claim_check(p, part.low_info, part.claim3_floor));
  }
}

TEST_CASE("partition_graph structural invariants and internal mass on random chains") {
  for (int s = 0; s < 40; ++s) {
    const int n = 1 + s % 12;
    const double beta = s % 2 ? 0.05 : 0.1;
    const auto p = fixtures::random_chain(n, 1000 + static_cast<std::uint64_t>(s), 0.3 + 0.02 * s);
    const auto part = partition_graph(p, beta, static_cast<std::uint64_t>(s));
    CHECK_NOTHROW(part.validate(n));
    CHECK(part.high_info.size() <= static_cast<std::size_t>(n));
    for (const auto& c : part.high_info) CHECK(internal_mass_ratio(p, c) >= 1.0 - beta - 1e-12);
  }
}

TEST_CASE("partition_graph is a pure function of its seed") {
  const auto p = fixtures::planted_blocks({4, 5, 3}, 0.01, 5);
  const auto a = partition_graph(p, 0.05, 42), b = partition_graph(p, 0.05, 42);
  CHECK(a.high_info == b.high_info);
  CHECK(a.low_info == b.low_info);
  CHECK(a.claim2_floors == b.claim2_floors);
}

TEST_CASE("Partition::validate catches broken partitions") {
  Partition part;
  part.high_info = {StateSubset({0, 1}, 4), StateSubset({1, 2}, 4)};
  part.claim2_floors = {0.1, 0.1};
  part.low_info = StateSubset({3}, 4);
  CHECK_THROWS_AS(part.validate(4), InvariantError);
  part.high_info = {StateSubset({0, 1}, 4)};
  part.claim2_floors = {0.1};
  CHECK_THROWS_AS(part.validate(4), InvariantError);
  part.low_info = StateSubset({2, 3}, 4);
  CHECK_NOTHROW(part.validate(4));
  part.high_info.push_back(StateSubset::empty(4));
  part.claim2_floors.push_back(0.1);
  CHECK_THROWS_AS(part.validate(4), InvariantError);
}

TEST_CASE("floors") {
  const Constants c;
  CHECK(claim2_floor(0.05, 16, 4, c) == Approx(0.05 / (8.0 * c.C_fc * std::log(16.0) * std::log(4.0))));
  CHECK(claim2_floor(0.05, 2, 1, c) == Approx(0.05 / (8.0 * c.C_fc)));
  CHECK(claim3_expansion_floor(0.1, 30, c) == Approx(0.1 / (8.0 * c.C_fc * std::log(30.0))));
}
