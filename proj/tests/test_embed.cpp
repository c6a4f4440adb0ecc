#include "mcid/embed.hpp"
#include "mcid/fixtures.hpp"
#include "mcid/oracle.hpp"
#include "mcid/rng.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace mcid;
using doctest::Approx;

namespace {

Embedding from_coords(Eigen::MatrixXd c) {
  Embedding e;
  e.coords = std::move(c);
  return e;
}

}  // namespace

TEST_CASE("bourgain_embed lower bound and distortion") {
  SUBCASE("two points") {
    const Metric d((Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished());
    const auto e = bourgain_embed(d, 1);
    CHECK(e.l1(0, 1) >= 1.0 - 1e-12);
  }
  SUBCASE("uniform metric on four points") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(4, 4);
    m.diagonal().setZero();
    const auto e = bourgain_embed(Metric(m), 5);
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        lo = std::min(lo, e.l1(i, j));
        hi = std::max(hi, e.l1(i, j));
      }
    CHECK(lo >= 1.0 - 1e-12);
    CHECK(hi / lo <= e.distortion + 1e-12);
    CHECK(e.distortion <= Constants{}.c_emb * std::log(4.0));
    CHECK(e.dimension() == bourgain_dimension(4, Constants{}.c_emb));
  }
  SUBCASE("all-zero metric maps to one point") {
    const auto e = bourgain_embed(Metric(Eigen::MatrixXd::Zero(3, 3)), 2);
    CHECK(e.coords.isZero());
  }
  SUBCASE("LP metrics: T collapses to one point and d <= L1 everywhere") {
    for (int s = 0; s < 20; ++s) {
      const int n = 4 + s % 7;
      const auto p = fixtures::random_chain(n, 300 + static_cast<std::uint64_t>(s), 0.8);
      const auto T = fixtures::random_subset(n, 2, 60 + static_cast<std::uint64_t>(s));
      const auto sol = solve_metric(p, T);
      const auto e = bourgain_embed(sol.metric, static_cast<std::uint64_t>(s));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(sol.metric(i, j) <= e.l1(i, j) * (1.0 + 1e-12) + 1e-15);
      CHECK(e.coords.row(T[0]) == e.coords.row(T[1]));
      // Every decomposition cut keeps T on one side.
      for (const auto& c : l1_to_cuts(e).cuts) CHECK(c.side.contains(T[0]) == c.side.contains(T[1]));
    }
  }
}

TEST_CASE("bourgain_embed is a pure function of its seed") {
  const auto sol = solve_metric(fixtures::random_chain(9, 4), StateSubset::empty(9));
  const auto a = bourgain_embed(sol.metric, 123), b = bourgain_embed(sol.metric, 123);
  CHECK(a.coords == b.coords);
  CHECK(a.rescale == b.rescale);
}

TEST_CASE("l1_to_cuts threshold construction") {
  SUBCASE("one dimension, coordinates 0, 1, 3") {
    const auto dec = l1_to_cuts(from_coords((Eigen::MatrixXd(3, 1) << 0, 1, 3).finished()));
    REQUIRE(dec.cuts.size() == 2);
    CHECK(dec.cuts[0].side == StateSubset({0}, 3));
    CHECK(dec.cuts[0].weight == 1.0);
    CHECK(dec.cuts[1].side == StateSubset({0, 1}, 3));
    CHECK(dec.cuts[1].weight == 2.0);
    CHECK(dec.distance(0, 2) == 3.0);
  }
  SUBCASE("equal coordinates give no cuts") {
    CHECK(l1_to_cuts(from_coords(Eigen::MatrixXd::Constant(4, 3, 2.5))).cuts.empty());
  }
  SUBCASE("two dimensions split into per-dimension cuts") {
    const auto both = l1_to_cuts(from_coords((Eigen::MatrixXd(3, 2) << 0, 5, 1, 4, 3, 4).finished()));
    const auto x = l1_to_cuts(from_coords((Eigen::MatrixXd(3, 1) << 0, 1, 3).finished()));
    const auto y = l1_to_cuts(from_coords((Eigen::MatrixXd(3, 1) << 5, 4, 4).finished()));
    CHECK(both.cuts.size() == x.cuts.size() + y.cuts.size());
  }
  SUBCASE("exact reconstruction on random coordinates") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + t % 10, m = 1 + t % 5;
      Eigen::MatrixXd c(n, m);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) c(i, j) = std::floor(8.0 * rng.uniform()) * rng.uniform();
      const auto e = from_coords(c);
      const auto dec = l1_to_cuts(e);
      CHECK(static_cast<int>(dec.cuts.size()) <= m * (n - 1));
      for (const auto& cut : dec.cuts) {
        CHECK(cut.weight > 0.0);
        CHECK_FALSE(cut.side.empty());
        CHECK_FALSE(cut.side.is_full());
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(std::abs(dec.distance(i, j) - e.l1(i, j)) <= 1e-12);
    }
  }
}

TEST_CASE("find_comp on the worked examples") {
  const auto b = ref::block4();
  SUBCASE("block chain") {
    const auto r = find_comp(b, StateSubset::full(4), StateSubset::empty(4), 1);
    CHECK(r.cut == StateSubset({0, 1}, 4));
    CHECK(r.cut_value == Approx(0.01));
  }
  SUBCASE("block chain with T = {2}") {
    const auto r = find_comp(b, StateSubset::full(4), StateSubset({2}, 4), 1);
    CHECK(r.cut == StateSubset({0, 1}, 4));
    CHECK(r.cut.disjoint(StateSubset({2}, 4)));
  }
  SUBCASE("uniform chain ties go to the smallest member sequence") {
    const auto r = find_comp(ref::uniform(4), StateSubset::full(4), StateSubset::empty(4), 1);
    CHECK(r.cut == StateSubset({0}, 4));
    CHECK(r.cut_value == Approx(0.25));
  }
  SUBCASE("restricted universe is measured on the submatrix") {
    const StateSubset universe({0, 1, 2}, 4);
    const auto r = find_comp(b, universe, StateSubset::empty(4), 1);
    CHECK(r.cut.subset_of(universe));
    CHECK(r.cut == StateSubset({0, 1}, 4));
    CHECK(r.cut_value == Approx(0.02 / 2.0));
  }
  CHECK_THROWS(find_comp(b, StateSubset::full(4), StateSubset::full(4), 1));
  CHECK_THROWS(find_comp(b, StateSubset({0}, 4), StateSubset::empty(4), 1));
  CHECK_THROWS(find_comp(b, StateSubset({0, 1}, 4), StateSubset({2}, 4), 1));
}

TEST_CASE("find_comp stays within the approximation allowance") {
  const Constants c;
  for (int s = 0; s < 20; ++s) {
    const int n = 3 + s % 8;
    const auto p = fixtures::random_chain(n, 700 + static_cast<std::uint64_t>(s), 0.6);
    const auto T = fixtures::random_subset(n, s % 2, 80 + static_cast<std::uint64_t>(s));
    const auto r = find_comp(p, StateSubset::full(n), T, static_cast<std::uint64_t>(s));
    const auto exact = oracle::sparsest_cut_exact(p, StateSubset::full(n), T);
    CHECK(r.cut.disjoint(T));
    CHECK(r.cut_value == Approx(cut_value(p, r.cut)));
    CHECK(r.cut_value >= exact.value - 1e-12);
    CHECK(r.cut_value <= c.C_fc * log_floor1(n) * exact.value + 1e-12);
  }
}
