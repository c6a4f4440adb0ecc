#include "mcid/embed.hpp"

#include "mcid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcid {

namespace {

constexpr int kMaxRedraws = 32;

int ceil_log2(int n) {
  int t = 0;
  while ((1 << t) < n) ++t;
  return t;
}

int repetitions(int n, double c_emb) { return std::max(1, static_cast<int>(std::ceil(c_emb * std::log(n)))); }

Eigen::MatrixXd draw_coordinates(const Metric& d, std::uint64_t seed, int attempt, double c_emb) {
  const int n = d.size();
  const int scales = ceil_log2(n);
  const int reps = repetitions(n, c_emb);
  const double dmax = d.matrix().maxCoeff();
  Eigen::MatrixXd coords(n, scales * reps);
  for (int t = 1; t <= scales; ++t) {
    const double keep = std::ldexp(1.0, -t);
    for (int r = 0; r < reps; ++r) {
      const int col = (t - 1) * reps + r;
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt), static_cast<std::uint64_t>(t),
                                 static_cast<std::uint64_t>(r)}));
      std::vector<int> anchor;
      for (int i = 0; i < n; ++i)
        if (rng.bernoulli(keep)) anchor.push_back(i);
      for (int i = 0; i < n; ++i) {
        double best = dmax;
        for (int a : anchor) best = std::min(best, d(i, a));
        coords(i, col) = best;
      }
    }
  }
  return coords / static_cast<double>(scales * reps);
}

double l1_row_distance(const Eigen::MatrixXd& c, int i, int j) { return (c.row(i) - c.row(j)).cwiseAbs().sum(); }

// Smallest ratio |f(i)-f(j)|_1 / d(i,j) over pairs with positive distance; 0 if some pair collapses.
double min_ratio(const Eigen::MatrixXd& c, const Metric& d) {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d.size(); ++i)
    for (int j = i + 1; j < d.size(); ++j)
      if (d(i, j) > 0.0) s = std::min(s, l1_row_distance(c, i, j) / d(i, j));
  return s;
}

}  // namespace

int bourgain_dimension(int n, double c_emb) { return n < 2 ? 0 : ceil_log2(n) * repetitions(n, c_emb); }

Embedding bourgain_embed(const Metric& d, std::uint64_t seed, double c_emb) {
  const int n = d.size();
  Embedding e;
  if (n < 2 || d.matrix().maxCoeff() <= 0.0) {
    e.coords = Eigen::MatrixXd::Zero(n, n < 2 ? 0 : 1);
    return e;
  }

  double s = 0.0;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    e.coords = draw_coordinates(d, seed, attempt, c_emb);
    e.draws = attempt + 1;
    s = min_ratio(e.coords, d);
    if (s > 0.0) break;
  }
  if (s <= 0.0) {
    // Fréchet coordinates x -> d(x, i) separate i from every j at distance d(i,j).
    std::vector<int> pivots;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (d(i, j) > 0.0 && l1_row_distance(e.coords, i, j) == 0.0 &&
            std::find(pivots.begin(), pivots.end(), i) == pivots.end())
          pivots.push_back(i);
    const Eigen::Index base = e.coords.cols();
    e.coords.conservativeResize(Eigen::NoChange, base + static_cast<Eigen::Index>(pivots.size()));
    for (std::size_t p = 0; p < pivots.size(); ++p) e.coords.col(base + p) = d.matrix().col(pivots[p]);
    s = min_ratio(e.coords, d);
  }

  if (s < 1.0) {
    e.rescale = 1.0 / s;
    e.coords *= e.rescale;
  }
  e.distortion = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (d(i, j) > 0.0) e.distortion = std::max(e.distortion, e.l1(i, j) / d(i, j));
  return e;
}

double CutDecomposition::distance(int i, int j) const {
  double total = 0.0;
  for (const auto& c : cuts)
    if (c.side.contains(i) != c.side.contains(j)) total += c.weight;
  return total;
}

CutDecomposition l1_to_cuts(const Embedding& e) {
  const int n = e.size();
  CutDecomposition out;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int dim = 0; dim < e.dimension(); ++dim) {
    const auto col = e.coords.col(dim);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return col(a) < col(b); });
    std::vector<State> below;
    for (int q = 0; q < n; ++q) {
      below.push_back(order[q]);
      if (q + 1 < n && col(order[q + 1]) > col(order[q]))
        out.cuts.push_back({StateSubset(below, n), col(order[q + 1]) - col(order[q])});
    }
  }
  return out;
}

namespace {

constexpr double kTieRel = 1e-12;

struct Best {
  StateSubset cut;
  double value = std::numeric_limits<double>::infinity();
  bool set = false;

  void offer(const StateSubset& s, double g) {
    const double tol = kTieRel * std::max(1.0, std::abs(value));
    if (!set || g < value - tol || (g <= value + tol && s < cut)) {
      if (!set || g < value) value = g;
      cut = s;
      set = true;
    }
  }
};

}  // namespace

FindCompResult find_comp(const Eigen::MatrixXd& p, const StateSubset& universe, const StateSubset& T,
                         std::uint64_t seed, const Constants& constants) {
  const int n = static_cast<int>(p.rows());
  if (universe.universe_size() != n || T.universe_size() != n)
    throw DimensionError("find_comp: subsets must index the matrix");
  if (!T.subset_of(universe)) throw std::invalid_argument("find_comp: T must lie inside the universe");
  if (universe.size() < 2) throw std::invalid_argument("find_comp: universe needs at least two states");
  if (universe.minus(T).empty()) throw std::invalid_argument("find_comp: no valid cut, universe \\ T is empty");

  const int u = universe.size();
  const Eigen::MatrixXd w = submatrix(p, universe);
  std::vector<State> t_local;
  for (int a = 0; a < u; ++a)
    if (T.contains(universe[a])) t_local.push_back(a);
  const StateSubset tl(t_local, u);

  const MetricSolution sol = solve_metric(w, tl);
  const Embedding emb = bourgain_embed(sol.metric, seed, constants.c_emb);
  const CutDecomposition dec = l1_to_cuts(emb);

  auto orient = [&](const StateSubset& s) {
    if (!tl.empty()) return s.disjoint(tl) ? s : s.complement();
    const StateSubset c = s.complement();
    return c < s ? c : s;
  };

  FindCompResult result;
  Best best;
  auto consider = [&](const StateSubset& raw) {
    if (raw.empty() || raw.is_full()) return;
    const StateSubset s = orient(raw);
    if (!s.disjoint(tl) || s.empty()) return;
    ++result.candidates;
    best.offer(s, cut_value(w, s));
  };
  for (const auto& c : dec.cuts) consider(c.side);
  for (int a = 0; a < u; ++a)
    if (!tl.contains(a)) consider(StateSubset({a}, u));

  std::vector<State> global;
  for (State a : best.cut) global.push_back(universe[a]);
  result.cut = StateSubset(std::move(global), n);
  result.cut_value = best.value;
  result.lp_value = sol.value;
  result.distortion = emb.distortion;
  return result;
}

}  // namespace mcid
