#include "mcid/fixtures.hpp"
#include "mcid/oracle.hpp"
#include "mcid/testing.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace mcid;
using doctest::Approx;

namespace {

const StochasticMatrix swap2{{0.0, 1.0}, {1.0, 0.0}};
const StochasticMatrix half{{0.5, 0.5}, {0.5, 0.5}};
const StochasticMatrix lean{{0.9, 0.1}, {0.1, 0.9}};

Trajectory word(std::vector<State> s, int n) { return Trajectory{std::move(s), 0, n}; }

SampleSet draw(const EdgeDistribution& p, std::size_t m, std::uint64_t seed) {
  const Eigen::VectorXd& pr = p.probs();
  Rng rng(seed);
  SampleSet s{{}, p.support_size()};
  for (std::size_t t = 0; t < m; ++t) {
    double u = rng.uniform(), acc = 0.0;
    int o = p.support_size() - 1;
    for (int i = 0; i < p.support_size(); ++i)
      if (u < (acc += pr(i))) {
        o = i;
        break;
      }
    s.outcomes.push_back(o);
  }
  return s;
}

}  // namespace

TEST_CASE("edge_distribution") {
  SUBCASE("doubly stochastic chain on the whole space has no exit mass") {
    CHECK(edge_distribution(ref::chain5(), StateSubset::full(5)).eta_mass() == Approx(0.0));
  }
  SUBCASE("single state of the fair coin") {
    const auto e = edge_distribution(half, StateSubset({0}, 2));
    CHECK(e.support_size() == 2);
    CHECK(e.mass(0, 0) == Approx(0.5));
    CHECK(e.eta_mass() == Approx(0.5));
  }
  SUBCASE("both states of the lazy chain") {
    const auto e = edge_distribution(lean, StateSubset::full(2));
    CHECK(e.mass(0, 0) == Approx(0.45));
    CHECK(e.mass(0, 1) == Approx(0.05));
    CHECK(e.mass(1, 0) == Approx(0.05));
    CHECK(e.mass(1, 1) == Approx(0.45));
    CHECK(e.eta_mass() == Approx(0.0));
    CHECK(e.index(1, 0) == 2);
    CHECK(e.eta_index() == 4);
  }
  CHECK_THROWS(edge_distribution(half, StateSubset::empty(2)));
  CHECK_THROWS_AS(edge_distribution(half, StateSubset({0}, 3)), DimensionError);
}

TEST_CASE("generate_with_requests hand traces") {
  const StateSubset both = StateSubset::full(2);
  SUBCASE("alternating word, one request per state") {
    const auto g = generate_with_requests(word({0, 1, 0, 1, 0}, 2), both, {1, 1});
    REQUIRE(g.samples);
    const auto e = edge_distribution(swap2, both);
    CHECK(g.samples->outcomes == std::vector<int>{e.index(0, 1), e.index(1, 0)});
    CHECK(g.samples->support_size == 5);
  }
  SUBCASE("a single position never emits") {
    CHECK_FALSE(generate_with_requests(word({0}, 2), both, {1, 0}).samples);
    CHECK_FALSE(generate_iid_samples(word({1}, 2), both, 1, 3).samples);
  }
  SUBCASE("exit to a state outside T emits eta") {
    const StateSubset T({0}, 3);
    const auto g = generate_with_requests(word({0, 2, 0}, 3), T, {1});
    REQUIRE(g.samples);
    CHECK(g.samples->outcomes == std::vector<int>{1});
  }
  SUBCASE("requests are decremented on every visit, even when already met") {
    // Two visits to 0 before the first visit to 1: the second visit to 0 must not emit.
    const auto g = generate_with_requests(word({0, 0, 0, 1, 1}, 2), both, {1, 1});
    REQUIRE(g.samples);
    CHECK(g.samples->outcomes == std::vector<int>{0, 3});
    CHECK(g.positions_used == 4);
  }
  SUBCASE("zero requests for a state still succeed") {
    const auto g = generate_with_requests(word({1, 1, 0}, 2), both, {0, 1});
    REQUIRE(g.samples);
    CHECK(g.samples->outcomes == std::vector<int>{3});
  }
  SUBCASE("a state visited too rarely fails the whole run") {
    CHECK_FALSE(generate_with_requests(word({0, 1, 0, 1}, 2), both, {1, 2}).samples);
  }
  CHECK_THROWS(generate_with_requests(word({0, 1}, 2), both, {1}));
  CHECK_THROWS(generate_iid_samples(word({0, 1}, 2), both, 0, 1));
  CHECK_THROWS(generate_iid_samples(word({0, 1}, 2), StateSubset::empty(2), 1, 1));
}

TEST_CASE("generate_iid_samples returns exactly l draws that match the edge distribution") {
  for (int s = 0; s < 4; ++s) {
    const auto p = fixtures::random_connected_chain(4, 40 + static_cast<std::uint64_t>(s));
    const auto T = fixtures::random_subset(4, 2, 50 + static_cast<std::uint64_t>(s));
    const std::size_t l = 10000;
    LazyTrajectory w(p, 0, 60 + static_cast<std::uint64_t>(s));
    const auto g = generate_iid_samples(w, T, l, 70 + static_cast<std::uint64_t>(s));
    REQUIRE(g.samples);
    CHECK(g.samples->size() == l);
    const Eigen::VectorXd emp = g.samples->histogram() / static_cast<double>(l);
    const auto e = edge_distribution(p, T);
    CHECK(0.5 * (emp - e.probs()).cwiseAbs().sum() <= 0.05);
  }
}

TEST_CASE("finite and streamed words agree") {
  const auto p = ref::chain5();
  const StateSubset T({1, 2, 3}, 5);
  LazyTrajectory lazy(p, 0, 12);
  const auto a = generate_iid_samples(lazy, T, 200, 4);
  REQUIRE(a.samples);
  const auto b = generate_iid_samples(simulate_from(p, 0, lazy.generated(), 12), T, 200, 4);
  REQUIRE(b.samples);
  CHECK(a.samples->outcomes == b.samples->outcomes);
  CHECK(a.positions_used == b.positions_used);
}

TEST_CASE("request histogram stays under twice its mean") {
  // m = ceil(10 k ln(n / eps)) draws from Uniform(k) with k = 8, n = 64, eps = 0.1.
  const int k = 8;
  const std::size_t m = static_cast<std::size_t>(std::ceil(10.0 * k * std::log(64.0 / 0.1)));
  int ok = 0;
  for (int t = 0; t < 1000; ++t) {
    Rng rng(derive_seed(99, static_cast<std::uint64_t>(t)));
    std::vector<long> h(k, 0);
    for (std::size_t s = 0; s < m; ++s) ++h[rng.below(k)];
    ok += *std::max_element(h.begin(), h.end()) <= static_cast<long>(2 * m / k);
  }
  CHECK(ok >= 990);
}

TEST_CASE("chi_square_statistic and required_iid_samples") {
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(2, 0.5);
  CHECK(chi_square_statistic((Eigen::VectorXd(2) << 5, 5).finished(), p) == Approx(-1.0));
  CHECK(chi_square_statistic((Eigen::VectorXd(2) << 10, 0).finished(), p) == Approx((25.0 - 10.0) / 15.0 + 25.0 / 5.0));
  CHECK(chi_square_statistic(Eigen::VectorXd::Zero(2), p) == 0.0);
  CHECK(required_iid_samples(4, 0.5, std::exp(-1.0), 4.0) == 16);
  CHECK(required_iid_samples(9, 0.1, 0.05, 4.0) == static_cast<std::size_t>(std::ceil(120.0 * std::log(20.0))));
}

TEST_CASE("identity_test_iid") {
  const auto e = edge_distribution(lean, StateSubset::full(2));
  const double eps_sq = 0.1, delta = 0.05;
  const std::size_t need = required_iid_samples(e.support_size(), eps_sq, delta, TesterOptions{}.c_test);

  SUBCASE("an outcome with zero mass is rejected outright") {
    const auto point = edge_distribution(StochasticMatrix(Eigen::MatrixXd::Identity(2, 2)), StateSubset({0}, 2));
    SampleSet s{std::vector<int>(need, point.eta_index()), point.support_size()};
    TesterOptions o;
    o.enforce_sample_requirement = false;
    const auto v = identity_test_iid(point, s, eps_sq, delta, o);
    CHECK(v.value == Decision::Different);
  }
  SUBCASE("too few samples is an error") {
    CHECK_THROWS_AS(identity_test_iid(e, draw(e, need - 1, 1), eps_sq, delta), InsufficientSamples);
    CHECK_THROWS_AS(identity_test_iid(e, SampleSet{{}, e.support_size()}, eps_sq, delta), InsufficientSamples);
    CHECK_NOTHROW(identity_test_iid(e, draw(e, need, 1), eps_sq, delta));
  }
  SUBCASE("support mismatch and bad parameters") {
    CHECK_THROWS_AS(identity_test_iid(e, SampleSet{{0}, 3}, eps_sq, delta), DimensionError);
    CHECK_THROWS(identity_test_iid(e, draw(e, need, 1), 0.0, delta));
    CHECK_THROWS(identity_test_iid(e, draw(e, need, 1), eps_sq, 1.0));
  }
  SUBCASE("null calibration: Same in at least 95 of 100 trials") {
    int same = 0;
    for (int t = 0; t < 100; ++t) {
      TesterOptions o;
      o.calibration_seed = derive_seed(5, static_cast<std::uint64_t>(t));
      same += identity_test_iid(e, draw(e, need, 1000 + static_cast<std::uint64_t>(t)), eps_sq, delta, o).value ==
              Decision::Same;
    }
    CHECK(same >= 95);
  }
  SUBCASE("far alternative: Different in at least 95 of 100 trials") {
    const auto q = edge_distribution(half, StateSubset::full(2));
    REQUIRE(hellinger_sq(e.distribution(), q.distribution()) >= eps_sq);
    int diff = 0;
    for (int t = 0; t < 100; ++t) {
      TesterOptions o;
      o.calibration_seed = derive_seed(6, static_cast<std::uint64_t>(t));
      diff += identity_test_iid(e, draw(q, need, 2000 + static_cast<std::uint64_t>(t)), eps_sq, delta, o).value ==
              Decision::Different;
    }
    CHECK(diff >= 95);
  }
}

TEST_CASE("identity_test_chain") {
  SUBCASE("a word too short for any component maps to Different") {
    const auto v = identity_test_chain(word({0, 1}, 4), ref::block4(), 0.5, 1);
    CHECK(v.value == Decision::Different);
    CHECK_FALSE(v.component);
    CHECK(v.reason == "AllGenerationFailed");
  }
  SUBCASE("input checks") {
    CHECK_THROWS_AS(identity_test_chain(word({0, 1}, 3), ref::block4(), 0.5, 1), DimensionError);
    CHECK_THROWS(identity_test_chain(word({0, 1}, 4), ref::block4(), 1.0, 1));
  }
  SUBCASE("pure function of its inputs") {
    const auto p = ref::uniform(4);
    const auto w = simulate_from(p, 0, trajectory_length(4, 0.5, Constants{}), 3);
    const auto a = identity_test_chain(w, p, 0.5, 8), b = identity_test_chain(w, p, 0.5, 8);
    CHECK(a.value == b.value);
    CHECK(a.reason == b.reason);
  }
}

TEST_CASE("sample size formulas") {
  const Constants c;
  CHECK(samples_per_component(3, 8, 0.5, c) == static_cast<std::size_t>(std::ceil(4.0 * 3 * std::log(8.0) / 0.25)));
  CHECK(trajectory_length(8, 0.5, c) ==
        static_cast<std::size_t>(std::ceil(8.0 * 8 * std::log(8.0) * std::log(8.0) / 0.0625)));
}

TEST_CASE("samples follow the order of the uniform draws, not the order of the word") {
  // A sticky chain visits long runs of one block; trajectory order would cluster outcomes.
  const auto p = ref::block4();
  const StateSubset T = StateSubset::full(4);
  const std::size_t l = 400;
  const std::uint64_t seed = 17;
  const auto g = generate_iid_samples(simulate_from(p, 0, 20000, 3), T, l, seed);
  REQUIRE(g.samples);
  Rng rng(seed);
  for (std::size_t s = 0; s < l; ++s) {
    const int from = static_cast<int>(rng.below(4));
    CHECK(g.samples->outcomes[s] / 4 == from);
  }
}
