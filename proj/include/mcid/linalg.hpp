#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcid {

using State = int;

inline constexpr double kStochasticTol = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sorted set of state indices drawn from the universe [0, n).
class StateSubset {
 public:
  StateSubset() = default;
  /// Members may be given in any order; duplicates and out-of-range indices throw.
  StateSubset(std::vector<State> members, int universe_size);
  StateSubset(std::initializer_list<State> members, int universe_size)
      : StateSubset(std::vector<State>(members), universe_size) {}

  static StateSubset full(int universe_size);
  static StateSubset empty(int universe_size) { return StateSubset({}, universe_size); }
  /// Members whose bit is set in `mask` (bit i <-> state i).
  static StateSubset from_mask(unsigned long long mask, int universe_size);

  const std::vector<State>& members() const { return members_; }
  int universe_size() const { return universe_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool is_full() const { return size() == universe_; }
  bool contains(State s) const;
  std::vector<bool> indicator() const;

  StateSubset complement() const;
  StateSubset unite(const StateSubset& other) const;
  StateSubset minus(const StateSubset& other) const;
  bool disjoint(const StateSubset& other) const;
  bool subset_of(const StateSubset& other) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  State operator[](std::size_t i) const { return members_[i]; }

  friend bool operator==(const StateSubset&, const StateSubset&) = default;
  /// Lexicographic order on the sorted member sequence.
  friend bool operator<(const StateSubset& a, const StateSubset& b) { return a.members_ < b.members_; }

  std::string to_string() const;

 private:
  std::vector<State> members_;
  int universe_ = 0;
};

/// Symmetric row-stochastic matrix. Construction validates and never renormalizes.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd entries);
  StochasticMatrix(std::initializer_list<std::initializer_list<double>> rows);

  int size() const { return static_cast<int>(p_.rows()); }
  const Eigen::MatrixXd& matrix() const { return p_; }
  double operator()(int i, int j) const { return p_(i, j); }

 private:
  Eigen::MatrixXd p_;
};

/// Scales rows of a nonnegative matrix to sum to 1. Symmetry is not restored.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& m);

/// Probability vector over an abstract finite support.
class Distribution {
 public:
  explicit Distribution(Eigen::VectorXd probs);
  Distribution(std::initializer_list<double> probs);

  static Distribution point_mass(int support, int at);
  static Distribution uniform(int support);

  int size() const { return static_cast<int>(p_.size()); }
  const Eigen::VectorXd& probs() const { return p_; }
  double operator[](int i) const { return p_(i); }

 private:
  Eigen::VectorXd p_;
};

/// Principal submatrix on the rows and columns of `s`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> submatrix(
    const Eigen::MatrixBase<Derived>& m, const StateSubset& s) {
  return m(s.members(), s.members());
}

/// Mass crossing from `s` to its complement, sum over i in s, j not in s of m(i,j).
template <typename Derived>
typename Derived::Scalar boundary_mass(const Eigen::MatrixBase<Derived>& m, const StateSubset& s) {
  if (s.universe_size() != m.rows() || m.rows() != m.cols())
    throw DimensionError("subset universe does not match matrix dimension");
  const auto inside = s.indicator();
  typename Derived::Scalar total{0};
  for (State i : s)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!inside[j]) total += m(i, j);
  return total;
}

/// Sum of m(i,j) over i, j both in s.
template <typename Derived>
typename Derived::Scalar internal_mass(const Eigen::MatrixBase<Derived>& m, const StateSubset& s) {
  if (s.universe_size() != m.rows() || m.rows() != m.cols())
    throw DimensionError("subset universe does not match matrix dimension");
  typename Derived::Scalar total{0};
  for (State i : s)
    for (State j : s) total += m(i, j);
  return total;
}

namespace detail {
inline void require_proper(const StateSubset& s) {
  if (s.empty() || s.is_full())
    throw std::invalid_argument("subset must be nonempty and proper (got " + s.to_string() + ")");
}
}  // namespace detail

/// h(S) = boundary / min(|S|, |S̄|).
template <typename Derived>
typename Derived::Scalar expansion(const Eigen::MatrixBase<Derived>& m, const StateSubset& s) {
  detail::require_proper(s);
  const int denom = std::min(s.size(), s.universe_size() - s.size());
  return boundary_mass(m, s) / denom;
}

/// g(S) = boundary / (|S| |S̄|).
template <typename Derived>
typename Derived::Scalar cut_value(const Eigen::MatrixBase<Derived>& m, const StateSubset& s) {
  detail::require_proper(s);
  const double denom = static_cast<double>(s.size()) * (s.universe_size() - s.size());
  return boundary_mass(m, s) / denom;
}

/// Average internal mass per member, sum_{i,j in S} m(i,j) / |S|.
template <typename Derived>
typename Derived::Scalar internal_mass_ratio(const Eigen::MatrixBase<Derived>& m, const StateSubset& s) {
  if (s.empty()) throw std::invalid_argument("internal_mass_ratio: empty subset");
  return internal_mass(m, s) / s.size();
}

inline double expansion(const StochasticMatrix& p, const StateSubset& s) { return expansion(p.matrix(), s); }
inline double cut_value(const StochasticMatrix& p, const StateSubset& s) { return cut_value(p.matrix(), s); }
inline double internal_mass_ratio(const StochasticMatrix& p, const StateSubset& s) {
  return internal_mass_ratio(p.matrix(), s);
}

/// Entrywise sqrt(P_ij * Q_ij).
Eigen::MatrixXd sq_matrix(const StochasticMatrix& p, const StochasticMatrix& q);

bool is_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& m, double tol = kStochasticTol);

/// Largest eigenvalue of a symmetric matrix.
double spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Largest absolute eigenvalue of a symmetric matrix.
double spectral_norm_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Eigenvalues of a symmetric matrix in descending order.
Eigen::VectorXd symmetric_eigenvalues_desc(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// 1 - rho(Sq(P, Q)), clamped to [0, 1].
double chain_distance(const StochasticMatrix& p, const StochasticMatrix& q);

double hellinger_sq(const Distribution& p, const Distribution& q);
double total_variation(const Distribution& p, const Distribution& q);

/// Natural log floored at 1, used wherever a threshold divides by "log n".
inline double log_floor1(double n) { return std::max(1.0, std::log(n)); }

}  // namespace mcid
