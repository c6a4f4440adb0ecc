#include "mcid/chain.hpp"
#include "mcid/fixtures.hpp"
#include "mcid/oracle.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace mcid;
using doctest::Approx;

namespace {

const StochasticMatrix swap2{{0.0, 1.0}, {1.0, 0.0}};
const StochasticMatrix half{{0.5, 0.5}, {0.5, 0.5}};

Trajectory word(std::vector<State> s, int n) { return Trajectory{std::move(s), 0, n}; }

}  // namespace

TEST_CASE("simulate") {
  CHECK(simulate_from(swap2, 0, 5, 1).states == std::vector<State>{0, 1, 0, 1, 0});
  const StochasticMatrix id(Eigen::MatrixXd::Identity(3, 3));
  CHECK(simulate_from(id, 2, 6, 1).states == std::vector<State>(6, 2));
  CHECK(simulate_from(ref::chain5(), 1, 200, 9).states == simulate_from(ref::chain5(), 1, 200, 9).states);
  CHECK(simulate_from(ref::chain5(), 1, 200, 9).states != simulate_from(ref::chain5(), 1, 200, 10).states);
  CHECK_THROWS(simulate_from(swap2, 2, 5, 1));
  CHECK_THROWS(simulate(swap2, Distribution::uniform(2), 0, 1));
  CHECK_THROWS_AS(simulate(swap2, Distribution::uniform(3), 4, 1), DimensionError);

  SUBCASE("empirical transitions of the fair coin chain within 3 sigma") {
    const auto w = simulate(half, Distribution::uniform(2), 100000, 4);
    const Eigen::MatrixXd c = transition_counts(w);
    for (int i = 0; i < 2; ++i) {
      const double visits = c.row(i).sum();
      const double sigma = std::sqrt(0.25 / visits);
      CHECK(std::abs(c(i, 0) / visits - 0.5) <= 3.0 * sigma);
    }
  }
}

TEST_CASE("zero-probability transitions are never drawn") {
  const auto p = ref::path6();
  const auto w = simulate_from(p, 0, 20000, 2);
  for (std::size_t t = 0; t + 1 < w.length(); ++t) CHECK(p(w.states[t], w.states[t + 1]) > 0.0);
}

TEST_CASE("LazyTrajectory extends on demand and refuses to pass its cap") {
  LazyTrajectory w(swap2, 1, 3, 10);
  CHECK(w.at(0) == 1);
  CHECK(w.at(5) == 0);
  CHECK(w.generated() == 6);
  CHECK(w.at(9) == 0);
  CHECK_THROWS_AS(w.at(10), TrajectoryCapExceeded);
  LazyTrajectory a(ref::chain5(), 0, 8), b(ref::chain5(), 0, 8);
  const auto direct = simulate_from(ref::chain5(), 0, 50, 8);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(a.at(i) == b.at(i));
    CHECK(a.at(i) == direct.states[i]);
  }
}

TEST_CASE("observed_chain") {
  SUBCASE("whole space is the identity map") { CHECK(observed_chain(ref::chain5(), StateSubset::full(5)).matrix() == ref::chain5().matrix()); }
  SUBCASE("uniform three-state chain on two states") {
    const auto q = observed_chain(ref::uniform(3), StateSubset({0, 1}, 3));
    CHECK(q.matrix().isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5), 1e-12));
  }
  SUBCASE("reference resolvent values") {
    const auto q = observed_chain(ref::chain5(), StateSubset({0, 2, 4}, 5));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(q(i, j) - ref::observed_chain5_T024[i][j]) <= 1e-12);
  }
  SUBCASE("dominates the restriction entrywise and stays stochastic") {
    for (int s = 0; s < 30; ++s) {
      const int n = 3 + s % 8;
      const auto p = fixtures::random_connected_chain(n, 200 + static_cast<std::uint64_t>(s));
      const auto T = fixtures::random_subset(n, 1 + s % (n - 1), 20 + static_cast<std::uint64_t>(s));
      const auto q = observed_chain(p, T);
      for (int a = 0; a < T.size(); ++a)
        for (int b = 0; b < T.size(); ++b) CHECK(q(a, b) >= p(T[a], T[b]) - 1e-15);
      // Corollary: the observed chain expands at least as well as T does inside P.
      if (T.size() >= 2)
        CHECK(oracle::cheeger_exact(q) >= oracle::min_internal_expansion_exact(p, T) - 1e-12);
    }
  }
  SUBCASE("Monte-Carlo agreement with the restricted trajectory") {
    const auto p = ref::chain5();
    const StateSubset T({0, 2, 4}, 5);
    const auto q = observed_chain(p, T);
    const auto w = restrict_trajectory(simulate_from(p, 0, 100000, 6), T);
    const Eigen::MatrixXd c = transition_counts(w);
    for (int a = 0; a < 3; ++a) {
      const double visits = c.row(T[a]).sum();
      for (int b = 0; b < 3; ++b) {
        const double pr = q(a, b), sigma = std::sqrt(pr * (1.0 - pr) / visits);
        CHECK(std::abs(c(T[a], T[b]) / visits - pr) <= 3.0 * sigma);
      }
    }
  }
  SUBCASE("absorbing complement is rejected") {
    const StochasticMatrix p{{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}};
    CHECK_THROWS(observed_chain(p, StateSubset({0, 1}, 3)));
    CHECK_THROWS(observed_chain(p, StateSubset({0}, 3)));
    // State 1 still returns to 0, so this one is fine.
    CHECK(observed_chain(p, StateSubset({0, 2}, 3))(0, 0) == Approx(1.0));
  }
}

TEST_CASE("restrict_trajectory and escape_count") {
  const auto w = word({0, 2, 1, 2, 0}, 3);
  const StateSubset T({0, 1}, 3);
  CHECK(restrict_trajectory(w, T).states == std::vector<State>{0, 1, 0});
  CHECK(restrict_trajectory(w, StateSubset::full(3)).states == w.states);
  CHECK(restrict_trajectory(w, StateSubset::empty(3)).states.empty());
  CHECK(escape_count(w, T) == 2);
  CHECK(escape_count(w, StateSubset::full(3)) == 0);
}

TEST_CASE("hitting_time_exact") {
  CHECK(hitting_time_exact(half) == Approx(2.0).epsilon(1e-10));
  CHECK(hitting_time_exact(ref::uniform(3)) == Approx(3.0).epsilon(1e-10));
  CHECK(hitting_time_exact(swap2) == Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(hitting_time_exact(ref::chain5()) - ref::hit_chain5) <= 1e-8);
  CHECK(std::abs(hitting_time_exact(ref::path6()) - ref::hit_path6) <= 1e-8);
  const StochasticMatrix split{{1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS(hitting_time_exact(split));
}

TEST_CASE("transition_counts") {
  const Eigen::MatrixXd c = transition_counts(word({0, 1, 1, 0, 1}, 2));
  CHECK(c(0, 1) == 2.0);
  CHECK(c(1, 1) == 1.0);
  CHECK(c(1, 0) == 1.0);
  CHECK(c(0, 0) == 0.0);
}

TEST_CASE("Trajectory::validate") {
  CHECK_NOTHROW(word({0, 1}, 2).validate());
  CHECK_THROWS(word({0, 2}, 2).validate());
}
