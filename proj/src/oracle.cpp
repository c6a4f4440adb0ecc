#include "mcid/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mcid::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieRel = 1e-12;

void require_budget(int size, int budget, const char* what) {
  if (size > budget)
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(size) + " states exceed the enumeration budget of " +
                         std::to_string(budget));
}

// Boundary mass of the subset given by `mask` over local indices [0, k) of matrix w.
double boundary(const Eigen::MatrixXd& w, unsigned long long mask) {
  const Eigen::Index k = w.rows();
  double b = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(mask >> i & 1ULL)) continue;
    for (Eigen::Index j = 0; j < k; ++j)
      if (!(mask >> j & 1ULL)) b += w(i, j);
  }
  return b;
}

struct Best {
  StateSubset cut;
  double value = kInf;
  bool set = false;

  void offer(const StateSubset& s, double v) {
    const double tol = kTieRel * std::max(1.0, std::abs(value));
    if (!set || v < value - tol || (v <= value + tol && s < cut)) {
      if (!set || v < value) value = v;
      cut = s;
      set = true;
    }
  }
};

StateSubset lift(unsigned long long mask, const std::vector<State>& members, int n) {
  std::vector<State> out;
  for (std::size_t a = 0; a < members.size(); ++a)
    if (mask >> a & 1ULL) out.push_back(members[a]);
  return StateSubset(std::move(out), n);
}

}  // namespace

CutResult sparsest_cut_exact(const Eigen::MatrixXd& p, const StateSubset& universe, const StateSubset& T) {
  const int n = static_cast<int>(p.rows());
  if (universe.universe_size() != n || T.universe_size() != n) throw DimensionError("sparsest_cut_exact: universe mismatch");
  if (universe.size() < 2) throw std::invalid_argument("sparsest_cut_exact: universe needs two states");
  const StateSubset free = universe.minus(T);
  if (free.empty()) throw std::invalid_argument("sparsest_cut_exact: no valid cut");
  require_budget(free.size(), kCutBudget, "sparsest_cut_exact");

  const auto& um = universe.members();
  const int u = universe.size();
  const Eigen::MatrixXd w = submatrix(p, universe);
  std::vector<int> free_local;
  for (int a = 0; a < u; ++a)
    if (!T.contains(um[a])) free_local.push_back(a);

  Best best;
  const unsigned long long limit = 1ULL << free_local.size();
  for (unsigned long long sub = 1; sub < limit; ++sub) {
    unsigned long long mask = 0;
    int count = 0;
    for (std::size_t b = 0; b < free_local.size(); ++b)
      if (sub >> b & 1ULL) {
        mask |= 1ULL << free_local[b];
        ++count;
      }
    if (count == u) continue;
    const double g = boundary(w, mask) / (static_cast<double>(count) * (u - count));
    if (best.set && g > best.value * (1 + kTieRel) + kTieRel) continue;  // pruned before building the set
    best.offer(lift(mask, um, n), g);
  }
  return {best.cut, best.value};
}

CutResult cheeger_cut_exact(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  if (n < 2) throw std::invalid_argument("cheeger_exact: needs at least two states");
  require_budget(n, kCutBudget, "cheeger_exact");
  const auto all = StateSubset::full(n).members();
  Best best;
  for (unsigned long long mask = 1; mask + 1 < (1ULL << n); ++mask) {
    const int count = std::popcount(mask);
    const double h = boundary(p, mask) / std::min(count, n - count);
    if (best.set && h > best.value * (1 + kTieRel) + kTieRel) continue;
    best.offer(lift(mask, all, n), h);
  }
  return {best.cut, best.value};
}

double cheeger_exact(const Eigen::MatrixXd& p) { return cheeger_cut_exact(p).value; }

double min_internal_expansion_exact(const Eigen::MatrixXd& p, const StateSubset& s) {
  if (s.size() < 2) return kInf;
  require_budget(s.size(), kCutBudget, "min_internal_expansion_exact");
  const Eigen::MatrixXd w = submatrix(p, s);
  const int k = s.size();
  double best = kInf;
  for (unsigned long long mask = 1; mask + 1 < (1ULL << k); ++mask) {
    const int count = std::popcount(mask);
    best = std::min(best, boundary(w, mask) / std::min(count, k - count));
  }
  return best;
}

double min_escape_ratio_exact(const Eigen::MatrixXd& p, const StateSubset& T) {
  if (T.empty()) return kInf;
  require_budget(T.size(), kClaimBudget, "low_info_claim_check");
  const int n = static_cast<int>(p.rows());
  const auto& tm = T.members();
  double best = kInf;
  std::vector<char> in(static_cast<std::size_t>(n));
  for (unsigned long long sub = 1; sub < (1ULL << tm.size()); ++sub) {
    std::fill(in.begin(), in.end(), 0);
    int count = 0;
    for (std::size_t a = 0; a < tm.size(); ++a)
      if (sub >> a & 1ULL) {
        in[tm[a]] = 1;
        ++count;
      }
    double out_mass = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!in[i]) continue;
      for (int j = 0; j < n; ++j)
        if (!in[j]) out_mass += p(i, j);
    }
    best = std::min(best, out_mass / count);
  }
  return best;
}

bool low_info_claim_check(const StochasticMatrix& p, const StateSubset& T, double floor) {
  return min_escape_ratio_exact(p.matrix(), T) >= floor;
}

EdgeDistances edge_distribution_distance_exact(const StochasticMatrix& p, const StochasticMatrix& q,
                                               const StateSubset& r) {
  if (p.size() != q.size()) throw DimensionError("edge_distribution_distance_exact: dimension mismatch");
  const double k = r.size();
  double tv = 0.0, bc = 0.0, in_p = 0.0, in_q = 0.0;
  for (State i : r)
    for (State j : r) {
      const double a = p(i, j) / k, b = q(i, j) / k;
      tv += std::abs(a - b);
      bc += std::sqrt(a * b);
      in_p += a;
      in_q += b;
    }
  const double eta_p = std::max(0.0, 1.0 - in_p), eta_q = std::max(0.0, 1.0 - in_q);
  tv += std::abs(eta_p - eta_q);
  bc += std::sqrt(eta_p * eta_q);
  return {0.5 * tv, std::max(0.0, 1.0 - bc)};
}

}  // namespace mcid::oracle
