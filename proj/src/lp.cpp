#include "mcid/lp.hpp"

#include "mcid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mcid {

LinearProgram::LinearProgram(int num_vars)
    : num_vars_(num_vars),
      objective_(static_cast<std::size_t>(num_vars), 0.0),
      lower_(static_cast<std::size_t>(num_vars), 0.0) {
  if (num_vars < 0) throw std::invalid_argument("negative variable count");
}

void LinearProgram::check_var(int var) const {
  if (var < 0 || var >= num_vars_) throw std::out_of_range("LP variable " + std::to_string(var) + " out of range");
}

void LinearProgram::set_objective(int var, double coef) {
  check_var(var);
  objective_[var] = coef;
}

void LinearProgram::set_lower_bound(int var, double lb) {
  check_var(var);
  lower_[var] = lb;
}

void LinearProgram::add_constraint(std::vector<LpTerm> terms, Relation rel, double rhs) {
  for (const auto& t : terms) check_var(t.var);
  constraints_.push_back({std::move(terms), rel, rhs});
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars_; ++j) worst = std::max(worst, lower_[j] - x[j]);
  for (const auto& c : constraints_) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * x[t.var];
    switch (c.relation) {
      case Relation::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::Equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

double LinearProgram::evaluate(const std::vector<double>& x) const {
  double v = 0.0;
  for (int j = 0; j < num_vars_; ++j) v += objective_[j] * x[j];
  return v;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr double kFeasTol = 1e-7;
constexpr double kPerturb = 1e-6;
constexpr int kStallRun = 50;

// Dense simplex tableau: row r reads x_basis[r] + t.row(r) . x_nonbasic = b(r).
struct Tableau {
  Eigen::MatrixXd t;
  Eigen::VectorXd b;
  Eigen::RowVectorXd reduced;
  std::vector<int> basis;
  std::vector<char> basic;
  long iterations = 0;
  long cap = 0;

  Eigen::Index rows() const { return t.rows(); }
  Eigen::Index cols() const { return t.cols(); }

  void mark_basis() {
    basic.assign(static_cast<std::size_t>(cols()), 0);
    for (int c : basis) basic[c] = 1;
  }

  void price(const Eigen::VectorXd& cost) {
    Eigen::VectorXd cb(rows());
    for (Eigen::Index r = 0; r < rows(); ++r) cb(r) = cost(basis[r]);
    reduced = cost.transpose() - cb.transpose() * t;
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    if (++iterations > cap) throw LpError("simplex iteration cap of " + std::to_string(cap) + " exceeded");
    const double p = t(r, c);
    t.row(r) /= p;
    b(r) /= p;
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f == 0.0) continue;
      t.row(i) -= f * t.row(r);
      b(i) -= f * b(r);
    }
    const double f = reduced(c);
    if (f != 0.0) reduced -= f * t.row(r);
    basic[basis[r]] = 0;
    basic[c] = 1;
    basis[r] = static_cast<int>(c);
  }

  void drop_row(Eigen::Index r) {
    const Eigen::Index last = rows() - 1;
    basic[basis[r]] = 0;
    if (r != last) {
      t.row(r) = t.row(last);
      b(r) = b(last);
      basis[r] = basis[last];
    }
    t.conservativeResize(last, Eigen::NoChange);
    b.conservativeResize(last);
    basis.pop_back();
  }

  // Primal simplex on the priced objective over allowed columns. False if unbounded.
  // Dantzig pricing; a run of pivots without objective gain switches to Bland's
  // lowest-index rule until the objective moves again.
  bool primal(const std::vector<char>& allowed) {
    int stalled = 0;
    for (;;) {
      const bool bland = stalled >= kStallRun;
      int entering = -1;
      double most = -kCostTol;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (!allowed[j] || basic[j] || reduced(j) >= most) continue;
        entering = static_cast<int>(j);
        if (bland) break;
        most = reduced(j);
      }
      if (entering < 0) return true;
      int leaving = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = t(r, entering);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, b(r)) / a;
        if (ratio < best || (ratio == best && basis[r] < basis[leaving])) {
          best = ratio;
          leaving = static_cast<int>(r);
        }
      }
      if (leaving < 0) return false;
      stalled = best * -reduced(entering) > kCostTol * kPivotTol ? 0 : stalled + 1;
      pivot(leaving, entering);
    }
  }

  // Dual simplex from a dual-feasible basis until every rhs is nonnegative.
  // False if the rows are infeasible.
  bool dual(const std::vector<char>& allowed) {
    for (;;) {
      int leaving = -1;
      double worst = -kFeasTol * 1e-3;
      for (Eigen::Index r = 0; r < rows(); ++r)
        if (b(r) < worst) {
          worst = b(r);
          leaving = static_cast<int>(r);
        }
      if (leaving < 0) return true;
      int entering = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < cols(); ++j) {
        const double a = t(leaving, j);
        if (!allowed[j] || basic[j] || a >= -kPivotTol) continue;
        const double ratio = std::max(0.0, reduced(j)) / -a;
        if (ratio < best) {
          best = ratio;
          entering = static_cast<int>(j);
        }
      }
      if (entering < 0) return false;
      pivot(leaving, entering);
    }
  }
};

}  // namespace

struct LpSession::Impl {
  LinearProgram lp;
  Tableau tab;
  Eigen::VectorXd cost;
  Eigen::VectorXd shift;  // rhs perturbation per slack column
  std::vector<char> allowed;
  bool started = false;
  bool infeasible = false;
  bool unbounded = false;

  explicit Impl(LinearProgram program) : lp(std::move(program)) {}

  void append_column(double c, double perturbation, bool usable) {
    const Eigen::Index j = tab.cols();
    tab.t.conservativeResize(Eigen::NoChange, j + 1);
    tab.t.col(j).setZero();
    tab.reduced.conservativeResize(j + 1);
    tab.reduced(j) = 0.0;
    cost.conservativeResize(j + 1);
    cost(j) = c;
    shift.conservativeResize(j + 1);
    shift(j) = perturbation;
    allowed.push_back(usable ? 1 : 0);
    tab.basic.push_back(0);
  }

  void start();
  void add_row(const LpConstraint& c);
  LpResult extract();
};

namespace {

double perturbation(Rng& rng, const Eigen::VectorXd& a) {
  return kPerturb * (1.0 + rng.uniform()) * std::max(1.0, a.cwiseAbs().maxCoeff());
}

Eigen::VectorXd dense_row(const LinearProgram& lp, const LpConstraint& c, double& rhs) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(lp.num_vars());
  for (const auto& t : c.terms) a(t.var) += t.coef;
  rhs = c.rhs;
  for (int j = 0; j < lp.num_vars(); ++j) rhs -= a(j) * lp.lower_bounds()[j];
  return a;
}

}  // namespace

// Slack rows carry a small deterministic rhs perturbation so that no vertex is degenerate.
// It is removed exactly on a copy of the tableau whenever a solution is read out.
void LpSession::Impl::start() {
  const int n = lp.num_vars();
  const auto& cons = lp.constraints();
  const auto m = static_cast<Eigen::Index>(cons.size());

  struct Row {
    Eigen::VectorXd a;
    Relation rel;
    double b;
  };
  std::vector<Row> rows;
  int n_slack = 0, n_art = 0;
  for (const auto& c : cons) {
    Row r;
    r.a = dense_row(lp, c, r.b);
    r.rel = c.relation;
    if (r.b < 0) {
      r.a = -r.a;
      r.b = -r.b;
      if (r.rel == Relation::LessEqual)
        r.rel = Relation::GreaterEqual;
      else if (r.rel == Relation::GreaterEqual)
        r.rel = Relation::LessEqual;
    }
    if (r.rel != Relation::Equal) ++n_slack;
    if (r.rel != Relation::LessEqual) ++n_art;
    rows.push_back(std::move(r));
  }

  const int total = n + n_slack + n_art;
  tab.t = Eigen::MatrixXd::Zero(m, total);
  tab.b = Eigen::VectorXd::Zero(m);
  tab.basis.assign(static_cast<std::size_t>(m), 0);
  cost = Eigen::VectorXd::Zero(total);
  shift = Eigen::VectorXd::Zero(total);
  std::vector<char> artificial(static_cast<std::size_t>(total), 0);
  Rng rng(0x5eed);
  int next_slack = n, next_art = n + n_slack;
  for (Eigen::Index r = 0; r < m; ++r) {
    tab.t.row(r).head(n) = rows[r].a.transpose();
    tab.b(r) = rows[r].b;
    switch (rows[r].rel) {
      case Relation::LessEqual:
        shift(next_slack) = perturbation(rng, rows[r].a);
        tab.b(r) += shift(next_slack);
        tab.t(r, next_slack) = 1.0;
        tab.basis[r] = next_slack++;
        break;
      case Relation::GreaterEqual:
        tab.t(r, next_slack++) = -1.0;
        tab.t(r, next_art) = 1.0;
        artificial[next_art] = 1;
        tab.basis[r] = next_art++;
        break;
      case Relation::Equal:
        tab.t(r, next_art) = 1.0;
        artificial[next_art] = 1;
        tab.basis[r] = next_art++;
        break;
    }
  }
  tab.mark_basis();
  tab.cap = 50L * (m + total);

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    for (int j = 0; j < total; ++j) phase1(j) = artificial[j];
    tab.price(phase1);
    tab.primal(std::vector<char>(static_cast<std::size_t>(total), 1));
    double infeas = 0.0;
    for (Eigen::Index r = 0; r < tab.rows(); ++r)
      if (artificial[tab.basis[r]]) infeas += tab.b(r);
    if (infeas > kFeasTol) {
      infeasible = true;
      return;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (Eigen::Index r = tab.rows() - 1; r >= 0; --r) {
      if (!artificial[tab.basis[r]]) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < total && col < 0; ++j)
        if (!artificial[j] && std::abs(tab.t(r, j)) > kPivotTol) col = j;
      if (col >= 0)
        tab.pivot(r, col);
      else
        tab.drop_row(r);
    }
  }

  for (int j = 0; j < n; ++j) cost(j) = lp.objective()[j];
  allowed.assign(static_cast<std::size_t>(total), 1);
  for (int j = 0; j < total; ++j) allowed[j] = !artificial[j];
  tab.price(cost);
  unbounded = !tab.primal(allowed);
}

void LpSession::Impl::add_row(const LpConstraint& c) {
  double rhs = 0.0;
  const Eigen::VectorXd a = dense_row(lp, c, rhs);
  Rng rng(derive_seed(0x5eed, static_cast<std::uint64_t>(lp.constraints().size())));
  const double delta = perturbation(rng, a);
  lp.add_constraint(c.terms, Relation::LessEqual, c.rhs);

  append_column(0.0, delta, true);
  const Eigen::Index slack = tab.cols() - 1;
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(tab.cols());
  row.head(a.size()) = a.transpose();
  row(slack) = 1.0;
  double b = rhs + delta;
  // Express the row in the current nonbasic variables.
  for (Eigen::Index r = 0; r < tab.rows(); ++r) {
    const double f = row(tab.basis[r]);
    if (f == 0.0) continue;
    row -= f * tab.t.row(r);
    b -= f * tab.b(r);
  }
  const Eigen::Index r = tab.rows();
  tab.t.conservativeResize(r + 1, Eigen::NoChange);
  tab.t.row(r) = row;
  tab.b.conservativeResize(r + 1);
  tab.b(r) = b;
  tab.basis.push_back(static_cast<int>(slack));
  tab.basic[slack] = 1;
}

LpResult LpSession::Impl::extract() {
  LpResult result;
  result.iterations = tab.iterations;
  if (infeasible) return result;
  if (unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  Tableau exact = tab;
  exact.b -= exact.t * shift;
  if (!exact.dual(allowed)) return result;
  // Dual pivots keep reduced costs nonnegative only up to round-off; polish.
  if (!exact.primal(allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  tab.iterations = exact.iterations;
  result.iterations = exact.iterations;

  const int n = lp.num_vars();
  result.x.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index r = 0; r < exact.rows(); ++r)
    if (exact.basis[r] < n) result.x[exact.basis[r]] = std::max(0.0, exact.b(r));
  for (int j = 0; j < n; ++j) result.x[j] += lp.lower_bounds()[j];
  const double violation = lp.max_violation(result.x);
  if (violation > kFeasTol)
    throw LpError("simplex returned a point violating constraints by " + std::to_string(violation));
  result.status = LpStatus::Optimal;
  result.value = lp.evaluate(result.x);
  return result;
}

LpSession::LpSession(LinearProgram lp) : impl_(std::make_unique<Impl>(std::move(lp))) {}
LpSession::~LpSession() = default;

void LpSession::add_constraint(std::vector<LpTerm> terms, double rhs) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= impl_->lp.num_vars()) throw std::out_of_range("LP variable out of range");
  const LpConstraint c{std::move(terms), Relation::LessEqual, rhs};
  if (impl_->started && !impl_->infeasible && !impl_->unbounded)
    impl_->add_row(c);
  else
    impl_->lp.add_constraint(c.terms, c.relation, c.rhs);
}

LpResult LpSession::solve() {
  auto& s = *impl_;
  if (!s.started) {
    s.started = true;
    s.start();
  } else if (!s.infeasible && !s.unbounded) {
    s.tab.iterations = 0;
    s.tab.cap = 50L * (s.tab.rows() + s.tab.cols());
    if (!s.tab.dual(s.allowed))
      s.infeasible = true;
    else
      s.unbounded = !s.tab.primal(s.allowed);
  }
  return s.extract();
}

LpResult solve_lp(const LinearProgram& lp) { return LpSession(lp).solve(); }

}  // namespace mcid
