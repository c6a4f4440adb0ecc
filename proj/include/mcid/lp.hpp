#pragma once

#include "mcid/linalg.hpp"

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mcid {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpTerm {
  int var;
  double coef;
};

struct LpConstraint {
  std::vector<LpTerm> terms;
  Relation relation;
  double rhs;
};

/// minimize objective . x  subject to constraints, x >= lower_bounds.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars);

  int num_vars() const { return num_vars_; }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<LpConstraint>& constraints() const { return constraints_; }
  const std::vector<double>& lower_bounds() const { return lower_; }

  void set_objective(int var, double coef);
  void set_lower_bound(int var, double lb);
  void add_constraint(std::vector<LpTerm> terms, Relation rel, double rhs);

  /// Largest violation of any constraint or bound at x (0 when feasible).
  double max_violation(const std::vector<double>& x) const;
  double evaluate(const std::vector<double>& x) const;

 private:
  void check_var(int var) const;

  int num_vars_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<LpConstraint> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  long iterations = 0;
};

/// Iteration cap or numerical breakdown. Never returned as an approximate answer.
class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense two-phase simplex with Bland's rule as the anti-cycling fallback; cap of
/// 50 (rows + cols) pivots per solve.
LpResult solve_lp(const LinearProgram& lp);

/// Simplex state that accepts extra `<=` rows after a solve and re-optimizes from the
/// previous basis.
class LpSession {
 public:
  explicit LpSession(LinearProgram lp);
  ~LpSession();
  LpSession(const LpSession&) = delete;
  LpSession& operator=(const LpSession&) = delete;

  void add_constraint(std::vector<LpTerm> terms, double rhs);
  LpResult solve();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Symmetric semimetric on n points.
class Metric {
 public:
  explicit Metric(Eigen::MatrixXd d);

  int size() const { return static_cast<int>(d_.rows()); }
  const Eigen::MatrixXd& matrix() const { return d_; }
  double operator()(int i, int j) const { return d_(i, j); }

  /// Largest amount by which d(i,j) exceeds d(i,k) + d(k,j) over all triples.
  double max_triangle_violation() const;

 private:
  Eigen::MatrixXd d_;
};

inline constexpr double kTriangleTol = 1e-7;

/// Index of the variable for the unordered pair {i, j}, i != j, in an n-point LP.
int pair_index(int i, int j, int n);

/// Explicit LP-CCC: one variable per unordered pair, every triangle inequality,
/// ordered-pair normalization sum_{i,j} d_ij = 1, and the component constraints for T.
/// An empty T gives the plain sparsest-cut relaxation.
LinearProgram build_lpccc(const Eigen::MatrixXd& weights, const StateSubset& T);
inline LinearProgram build_lpccc(const StochasticMatrix& p, const StateSubset& T) {
  return build_lpccc(p.matrix(), T);
}

struct MetricSolution {
  Metric metric;
  double value;
  int lp_rounds = 0;
  int triangle_rows = 0;
};

/// Solves LP-CCC on `weights` (symmetric, nonnegative) with T collapsed to a single node and
/// triangle inequalities added lazily until none is violated.
MetricSolution solve_metric(const Eigen::MatrixXd& weights, const StateSubset& T);
inline MetricSolution solve_metric(const StochasticMatrix& p, const StateSubset& T) {
  return solve_metric(p.matrix(), T);
}

/// Expands an explicit LP-CCC solution vector into a metric.
Metric metric_from_pairs(const std::vector<double>& x, int n);

}  // namespace mcid
