#include "mcid/fixtures.hpp"

#include "mcid/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mcid::fixtures {

namespace {

// Puts the leftover row mass of a symmetric nonnegative off-diagonal matrix on the diagonal.
StochasticMatrix close_diagonal(Eigen::MatrixXd m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m(i, i) = 0.0;
    m(i, i) = std::max(0.0, 1.0 - m.row(i).sum());
  }
  return StochasticMatrix(std::move(m));
}

// Scales a symmetric nonnegative matrix (zero diagonal) so its largest row sum is `target`.
Eigen::MatrixXd scale_rows_to(const Eigen::MatrixXd& w, double target) {
  const double d = w.rowwise().sum().maxCoeff();
  return d > 0.0 ? Eigen::MatrixXd(w * (target / d)) : w;
}

Eigen::MatrixXd random_symmetric(int n, Rng& rng, double density, double lo = 0.0) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (density >= 1.0 || rng.bernoulli(density)) w(i, j) = w(j, i) = lo + (1.0 - lo) * rng.uniform();
  return w;
}

void require_even(int n, const char* what) {
  if (n < 4 || n % 2) throw std::invalid_argument(std::string(what) + ": n must be even and at least 4");
}

}  // namespace

StochasticMatrix random_chain(int n, std::uint64_t seed, double density) {
  if (n < 1) throw std::invalid_argument("random_chain: n must be positive");
  Rng rng(seed);
  Eigen::MatrixXd w = random_symmetric(n, rng, density);
  // A random share of each row is left on the diagonal.
  return close_diagonal(scale_rows_to(w, 0.5 + 0.5 * rng.uniform()));
}

StochasticMatrix random_connected_chain(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_connected_chain: n must be positive");
  Rng rng(seed);
  Eigen::MatrixXd w = random_symmetric(n, rng, 1.0, 0.05);
  return close_diagonal(scale_rows_to(w, 0.5 + 0.5 * rng.uniform()));
}

StochasticMatrix planted_blocks(const std::vector<int>& sizes, double leak, std::uint64_t seed) {
  if (sizes.empty() || !(leak >= 0.0 && leak < 1.0)) throw std::invalid_argument("planted_blocks: bad arguments");
  const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  std::vector<int> block;
  for (std::size_t b = 0; b < sizes.size(); ++b) block.insert(block.end(), static_cast<std::size_t>(sizes[b]), static_cast<int>(b));
  Rng rng(seed);
  Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(n, n), cross = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (block[i] == block[j]) inner(i, j) = inner(j, i) = 0.5 + 0.5 * rng.uniform();
      else cross(i, j) = cross(j, i) = rng.uniform();
    }
  return close_diagonal(scale_rows_to(inner, 1.0 - leak) + scale_rows_to(cross, leak));
}

StochasticMatrix two_block_chain(int n, double leak) {
  require_even(n, "two_block_chain");
  const int h = n / 2;
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = ((i < h) == (j < h) ? 1.0 - leak : leak) / h;
  return StochasticMatrix(std::move(p));
}

StochasticMatrix circulant_two_block_chain(int n, double leak, const std::vector<int>& offsets) {
  require_even(n, "circulant_two_block_chain");
  const int h = n / 2;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int base = i < h ? 0 : h, local = i - base;
    for (int off : offsets) p(i, base + ((local + off) % h + h) % h) += (1.0 - leak) / offsets.size();
    for (int j = 0; j < n; ++j)
      if ((i < h) != (j < h)) p(i, j) = leak / h;
  }
  return StochasticMatrix(std::move(p));
}

StochasticMatrix bridge_chain(int n, double bridge) {
  require_even(n, "bridge_chain");
  const int h = n / 2;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((i < h) == (j < h)) p(i, j) = 1.0 / h;
  p(h - 1, h) = p(h, h - 1) = bridge;
  p(h - 1, h - 1) -= bridge;
  p(h, h) -= bridge;
  return StochasticMatrix(std::move(p));
}

StochasticMatrix circulant_bridge_chain(int n, double bridge, const std::vector<int>& offsets) {
  Eigen::MatrixXd p = circulant_two_block_chain(n, 0.0, offsets).matrix();
  const int h = n / 2;
  p(h - 1, h) = p(h, h - 1) = bridge;
  // Take the bridge mass from the largest entry of each endpoint row so entries stay nonnegative.
  for (int end : {h - 1, h}) {
    Eigen::Index at;
    p.row(end).maxCoeff(&at);
    p(end, at) -= bridge;
    if (at != end) p(at, end) -= bridge, p(at, at) += bridge;
  }
  return StochasticMatrix(std::move(p));
}

StochasticMatrix three_region_chain(int block, int region, double leak) {
  if (block < 2 || region < 1) throw std::invalid_argument("three_region_chain: bad sizes");
  const int n = 2 * block + region, r0 = 2 * block;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < r0; ++i) {
    const int base = i < block ? 0 : block;
    for (int j = base; j < base + block; ++j) p(i, j) = (1.0 - leak) / block;
    for (int j = r0; j < n; ++j) p(i, j) = p(j, i) = leak / region;
  }
  for (int i = r0; i < n; ++i) {
    const double inside = (1.0 - p.row(i).sum()) / region;
    if (inside < 0.0) throw std::invalid_argument("three_region_chain: region overflows, lower the leak");
    for (int j = r0; j < n; ++j) p(i, j) = inside;
  }
  return StochasticMatrix(std::move(p));
}

StochasticMatrix random_matching_chain(int n, std::uint64_t seed) {
  std::vector<State> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; k += 2) p(perm[k], perm[k + 1]) = p(perm[k + 1], perm[k]) = 1.0;
  if (n % 2) p(perm[n - 1], perm[n - 1]) = 1.0;
  return StochasticMatrix(std::move(p));
}

StochasticMatrix uniform_chain(int n) { return StochasticMatrix(Eigen::MatrixXd::Constant(n, n, 1.0 / n)); }

Distribution random_distribution(int k, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(k);
  for (int i = 0; i < k; ++i) v(i) = rng.bernoulli(0.2) ? 0.0 : rng.uniform();
  if (v.sum() <= 0.0) v(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(k)))) = 1.0;
  return Distribution(v / v.sum());
}

StateSubset random_subset(int n, int size, std::uint64_t seed) {
  if (size < 0 || size > n) throw std::invalid_argument("random_subset: size out of range");
  std::vector<State> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  Rng rng(seed);
  for (int i = 0; i < size; ++i) std::swap(all[i], all[i + rng.below(static_cast<std::uint64_t>(n - i))]);
  all.resize(static_cast<std::size_t>(size));
  return StateSubset(std::move(all), n);
}

}  // namespace mcid::fixtures
