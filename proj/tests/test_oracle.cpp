#include "mcid/fixtures.hpp"
#include "mcid/oracle.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace mcid;
using namespace mcid::oracle;
using doctest::Approx;

namespace {

const StochasticMatrix half{{0.5, 0.5}, {0.5, 0.5}};
const StochasticMatrix lean{{0.9, 0.1}, {0.1, 0.9}};

}  // namespace

TEST_CASE("sparsest_cut_exact") {
  SUBCASE("block chain") {
    const auto r = sparsest_cut_exact(ref::block4(), StateSubset::full(4), StateSubset::empty(4));
    CHECK(r.cut == StateSubset({0, 1}, 4));
    CHECK(r.value == Approx(0.01));
  }
  SUBCASE("uniform chain: all cuts tie, smallest wins") {
    const auto r = sparsest_cut_exact(ref::uniform(4), StateSubset::full(4), StateSubset::empty(4));
    CHECK(r.cut == StateSubset({0}, 4));
    CHECK(r.value == Approx(0.25));
  }
  SUBCASE("only one candidate left") {
    const auto r = sparsest_cut_exact(ref::chain5(), StateSubset::full(5), StateSubset({0, 1, 2, 3}, 5));
    CHECK(r.cut == StateSubset({4}, 5));
  }
  SUBCASE("reference values") {
    const auto a = sparsest_cut_exact(ref::chain5(), StateSubset::full(5), StateSubset::empty(5));
    CHECK(a.cut == StateSubset({0, 1, 4}, 5));
    CHECK(std::abs(a.value - ref::sparsest_chain5) <= 1e-12);
    const auto b = sparsest_cut_exact(ref::chain5(), StateSubset::full(5), StateSubset({1, 3}, 5));
    CHECK(b.cut == StateSubset({4}, 5));
    CHECK(std::abs(b.value - ref::sparsest_chain5_T13) <= 1e-12);
    const auto c = sparsest_cut_exact(ref::path6(), StateSubset::full(6), StateSubset::empty(6));
    CHECK(c.cut == StateSubset({0, 1, 2}, 6));
    CHECK(std::abs(c.value - ref::sparsest_path6) <= 1e-12);
    const auto d = sparsest_cut_exact(ref::path6(), StateSubset::full(6), StateSubset({0, 5}, 6));
    CHECK(d.cut == StateSubset({1, 2}, 6));
    CHECK(std::abs(d.value - ref::sparsest_path6_T05) <= 1e-12);
  }
  SUBCASE("budget") {
    CHECK_THROWS_AS(sparsest_cut_exact(ref::uniform(25), StateSubset::full(25), StateSubset::empty(25)),
                    BudgetExceeded);
  }
}

TEST_CASE("cheeger_exact") {
  CHECK(cheeger_exact(ref::uniform(4)) == Approx(0.5));
  CHECK(cheeger_exact(ref::block4()) == Approx(0.02));
  CHECK(cheeger_cut_exact(ref::block4().matrix()).cut == StateSubset({0, 1}, 4));
  CHECK(cheeger_exact(StochasticMatrix(Eigen::MatrixXd::Identity(4, 4))) == 0.0);
  CHECK(std::abs(cheeger_exact(ref::chain5()) - ref::cheeger_chain5) <= 1e-12);
  CHECK(std::abs(cheeger_exact(ref::path6()) - ref::cheeger_path6) <= 1e-12);
  CHECK_THROWS_AS(cheeger_exact(ref::uniform(25)), BudgetExceeded);
}

TEST_CASE("the argmin cuts satisfy the expansion sandwich") {
  for (int s = 0; s < 20; ++s) {
    const int n = 3 + s % 9;
    const auto p = fixtures::random_chain(n, 31 + static_cast<std::uint64_t>(s), 0.7);
    const auto g = sparsest_cut_exact(p, StateSubset::full(n), StateSubset::empty(n));
    const auto h = cheeger_cut_exact(p.matrix());
    CHECK(0.5 * n * g.value <= expansion(p, g.cut) + 1e-12);
    CHECK(expansion(p, h.cut) <= n * cut_value(p, h.cut) + 1e-12);
  }
}

TEST_CASE("min_internal_expansion_exact") {
  CHECK(std::abs(min_internal_expansion_exact(ref::chain5(), StateSubset({0, 1, 2, 3}, 5)) -
                 ref::internal_expansion_chain5_S0123) <= 1e-12);
  CHECK(min_internal_expansion_exact(ref::chain5(), StateSubset::full(5)) == Approx(cheeger_exact(ref::chain5())));
  CHECK(std::isinf(min_internal_expansion_exact(ref::chain5(), StateSubset({2}, 5))));
  // Only the two-state sub-block: the mass leaving to the other block does not count.
  CHECK(min_internal_expansion_exact(ref::block4(), StateSubset({0, 1}, 4)) == Approx(0.49));
}

TEST_CASE("low_info_claim_check and escape ratios") {
  CHECK(low_info_claim_check(ref::chain5(), StateSubset::empty(5), 1.0));
  CHECK_FALSE(low_info_claim_check(StochasticMatrix(Eigen::MatrixXd::Identity(3, 3)), StateSubset({1}, 3), 1e-9));
  CHECK(std::abs(min_escape_ratio_exact(ref::chain5().matrix(), StateSubset({3, 4}, 5)) -
                 ref::escape_ratio_chain5_T34) <= 1e-12);
  CHECK(std::abs(min_escape_ratio_exact(ref::path6().matrix(), StateSubset({2, 3}, 6)) -
                 ref::escape_ratio_path6_T23) <= 1e-12);
  CHECK(low_info_claim_check(ref::path6(), StateSubset({2, 3}, 6), 0.3 - 1e-12));
  CHECK_FALSE(low_info_claim_check(ref::path6(), StateSubset({2, 3}, 6), 0.3 + 1e-9));
  CHECK_THROWS_AS(low_info_claim_check(ref::uniform(21), StateSubset::full(21), 0.1), BudgetExceeded);
}

TEST_CASE("edge_distribution_distance_exact") {
  const auto same = edge_distribution_distance_exact(lean, lean, StateSubset::full(2));
  CHECK(same.tv == 0.0);
  CHECK(same.hel_sq == Approx(0.0));
  CHECK(edge_distribution_distance_exact(half, lean, StateSubset::full(2)).tv == Approx(0.4));
  CHECK(edge_distribution_distance_exact(half, lean, StateSubset({0}, 2)).tv == Approx(0.4));
  const auto r = edge_distribution_distance_exact(ref::chain5(), ref::chain5_other(), StateSubset({1, 2, 4}, 5));
  CHECK(std::abs(r.tv - ref::edge_tv_chain5_R124) <= 1e-12);
  CHECK(std::abs(r.hel_sq - ref::edge_hel_chain5_R124) <= 1e-12);
  CHECK_THROWS_AS(edge_distribution_distance_exact(half, ref::uniform(3), StateSubset({0}, 2)), DimensionError);
}
