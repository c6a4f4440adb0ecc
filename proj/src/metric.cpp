#include "mcid/lp.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace mcid {

Metric::Metric(Eigen::MatrixXd d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols()) throw DimensionError("metric must be square");
  for (Eigen::Index i = 0; i < d_.rows(); ++i) {
    if (d_(i, i) != 0.0) throw InvariantError("metric has a nonzero diagonal");
    for (Eigen::Index j = 0; j < d_.cols(); ++j) {
      if (!(d_(i, j) >= 0.0)) throw InvariantError("metric has a negative entry");
      if (d_(i, j) != d_(j, i)) throw InvariantError("metric is not symmetric");
    }
  }
  if (max_triangle_violation() > kTriangleTol) throw InvariantError("metric violates the triangle inequality");
}

double Metric::max_triangle_violation() const {
  const Eigen::Index n = d_.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) worst = std::max(worst, d_(i, j) - d_(i, k) - d_(k, j));
  return worst;
}

int pair_index(int i, int j, int n) {
  if (i == j) throw std::invalid_argument("pair_index: i == j");
  if (i > j) std::swap(i, j);
  // Row-major upper triangle without the diagonal.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

Metric metric_from_pairs(const std::vector<double>& x, int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = std::max(0.0, x[pair_index(i, j, n)]);
  return Metric(std::move(d));
}

namespace {

void check_weights(const Eigen::MatrixXd& w, const StateSubset& T) {
  if (w.rows() != w.cols()) throw DimensionError("weight matrix must be square");
  if (T.universe_size() != w.rows()) throw DimensionError("T universe does not match matrix dimension");
  if (w.rows() < 2) throw std::invalid_argument("LP-CCC needs at least two states");
  if (T.is_full()) throw std::invalid_argument("LP-CCC: T must be a proper subset");
}

}  // namespace

LinearProgram build_lpccc(const Eigen::MatrixXd& weights, const StateSubset& T) {
  check_weights(weights, T);
  const int n = static_cast<int>(weights.rows());
  LinearProgram lp(n * (n - 1) / 2);

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lp.set_objective(pair_index(i, j, n), weights(i, j) + weights(j, i));

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        lp.add_constraint({{pair_index(i, j, n), 1.0}, {pair_index(i, k, n), -1.0}, {pair_index(k, j, n), -1.0}},
                          Relation::LessEqual, 0.0);
      }

  std::vector<LpTerm> norm;
  for (int v = 0; v < lp.num_vars(); ++v) norm.push_back({v, 2.0});
  lp.add_constraint(std::move(norm), Relation::Equal, 1.0);

  const auto& t = T.members();
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a + 1; b < t.size(); ++b)
      lp.add_constraint({{pair_index(t[a], t[b], n), 1.0}}, Relation::Equal, 0.0);
  for (std::size_t a = 0; a + 1 < t.size(); ++a)
    for (int k = 0; k < n; ++k) {
      if (T.contains(k)) continue;
      lp.add_constraint({{pair_index(t[a], k, n), 1.0}, {pair_index(t[a + 1], k, n), -1.0}}, Relation::Equal, 0.0);
    }
  return lp;
}

MetricSolution solve_metric(const Eigen::MatrixXd& weights, const StateSubset& T) {
  check_weights(weights, T);
  const int n = static_cast<int>(weights.rows());

  // Collapsed nodes: every state outside T, then one node standing for all of T.
  std::vector<int> node_of(static_cast<std::size_t>(n), -1);
  std::vector<int> free_states;
  for (int i = 0; i < n; ++i)
    if (!T.contains(i)) {
      node_of[i] = static_cast<int>(free_states.size());
      free_states.push_back(i);
    }
  const bool has_super = !T.empty();
  const int super = static_cast<int>(free_states.size());
  if (has_super)
    for (State s : T) node_of[s] = super;
  const int k = super + (has_super ? 1 : 0);

  // Weight and multiplicity of each collapsed pair.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd mult = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int a = node_of[i], b = node_of[j];
      if (a == b) continue;
      w(a, b) += weights(i, j);
      mult(a, b) += 1.0;
    }

  LinearProgram base(k * (k - 1) / 2);
  std::vector<LpTerm> norm;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const int v = pair_index(a, b, k);
      base.set_objective(v, w(a, b) + w(b, a));
      norm.push_back({v, mult(a, b) + mult(b, a)});
    }
  base.add_constraint(std::move(norm), Relation::Equal, 1.0);

  // Lazy triangle generation, warm-started from the previous basis. Violations are
  // scanned in a fixed order so the result depends only on the input.
  std::vector<std::tuple<int, int, int>> active;  // (a<b, c): d_ab <= d_ac + d_cb
  std::vector<char> present(static_cast<std::size_t>(k * (k - 1) / 2) * static_cast<std::size_t>(k), 0);
  auto key = [&](int a, int b, int c) { return static_cast<std::size_t>(pair_index(a, b, k)) * k + c; };

  LpSession session(std::move(base));
  LpResult res;
  int rounds = 0;
  for (;;) {
    ++rounds;
    res = session.solve();
    if (res.status != LpStatus::Optimal) throw LpError("LP-CCC relaxation reported infeasible or unbounded");

    auto d = [&](int a, int b) { return a == b ? 0.0 : res.x[pair_index(a, b, k)]; };
    std::vector<std::tuple<int, int, int>> added;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        for (int c = 0; c < k; ++c) {
          if (c == a || c == b || present[key(a, b, c)]) continue;
          if (d(a, b) - d(a, c) - d(c, b) > 1e-10) added.emplace_back(a, b, c);
        }
    if (added.empty()) break;
    for (auto [a, b, c] : added) {
      present[key(a, b, c)] = 1;
      session.add_constraint({{pair_index(a, b, k), 1.0}, {pair_index(a, c, k), -1.0}, {pair_index(c, b, k), -1.0}},
                             0.0);
    }
    active.insert(active.end(), added.begin(), added.end());
  }

  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int a = node_of[i], b = node_of[j];
      if (a == b) continue;
      double v = res.x[pair_index(a, b, k)];
      if (v < 1e-13) v = 0.0;
      full(i, j) = v;
    }
  return MetricSolution{Metric(std::move(full)), res.value, rounds, static_cast<int>(active.size())};
}

}  // namespace mcid
