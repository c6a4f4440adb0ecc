#pragma once

#include "mcid/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace mcid::oracle {

/// Enumeration refused because the candidate space exceeds the budget.
class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr int kCutBudget = 24;
inline constexpr int kClaimBudget = 20;

struct CutResult {
  StateSubset cut;
  double value;
};

/// Exact argmin of g over nontrivial S inside `universe` with S ∩ T = ∅, measured on P
/// restricted to the universe. Ties go to the lexicographically smallest S.
CutResult sparsest_cut_exact(const Eigen::MatrixXd& p, const StateSubset& universe, const StateSubset& T);
inline CutResult sparsest_cut_exact(const StochasticMatrix& p, const StateSubset& universe, const StateSubset& T) {
  return sparsest_cut_exact(p.matrix(), universe, T);
}

/// min over nontrivial S of h_P(S).
double cheeger_exact(const Eigen::MatrixXd& p);
inline double cheeger_exact(const StochasticMatrix& p) { return cheeger_exact(p.matrix()); }

/// Argmin for the Cheeger constant (lexicographic tie-break).
CutResult cheeger_cut_exact(const Eigen::MatrixXd& p);

/// min over nontrivial R ⊂ S of h_{P_S}(R); +inf when |S| < 2.
double min_internal_expansion_exact(const Eigen::MatrixXd& p, const StateSubset& s);
inline double min_internal_expansion_exact(const StochasticMatrix& p, const StateSubset& s) {
  return min_internal_expansion_exact(p.matrix(), s);
}

/// min over nonempty R ⊆ T of sum_{i in R, j not in R} P_ij / |R|; +inf when T is empty.
double min_escape_ratio_exact(const Eigen::MatrixXd& p, const StateSubset& T);

/// True iff every nonempty R ⊆ T satisfies sum_{i in R, j not in R} P_ij / |R| >= floor.
bool low_info_claim_check(const StochasticMatrix& p, const StateSubset& T, double floor);

struct EdgeDistances {
  double tv;
  double hel_sq;
};

/// d_TV and d_Hel^2 between the edge distributions of P and Q on R, by direct summation.
EdgeDistances edge_distribution_distance_exact(const StochasticMatrix& p, const StochasticMatrix& q,
                                               const StateSubset& r);

}  // namespace mcid::oracle
