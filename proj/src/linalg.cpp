#include "mcid/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace mcid {

StateSubset::StateSubset(std::vector<State> members, int universe_size)
    : members_(std::move(members)), universe_(universe_size) {
  if (universe_size < 0) throw std::invalid_argument("negative universe size");
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 0 || members_[i] >= universe_size)
      throw std::out_of_range("state " + std::to_string(members_[i]) + " outside universe of size " +
                              std::to_string(universe_size));
    if (i > 0 && members_[i] == members_[i - 1])
      throw std::invalid_argument("duplicate state " + std::to_string(members_[i]));
  }
}

StateSubset StateSubset::full(int universe_size) {
  std::vector<State> all(static_cast<std::size_t>(universe_size));
  for (int i = 0; i < universe_size; ++i) all[i] = i;
  return StateSubset(std::move(all), universe_size);
}

StateSubset StateSubset::from_mask(unsigned long long mask, int universe_size) {
  std::vector<State> m;
  for (int i = 0; i < universe_size; ++i)
    if (mask >> i & 1ULL) m.push_back(i);
  return StateSubset(std::move(m), universe_size);
}

bool StateSubset::contains(State s) const { return std::binary_search(members_.begin(), members_.end(), s); }

std::vector<bool> StateSubset::indicator() const {
  std::vector<bool> in(static_cast<std::size_t>(universe_), false);
  for (State s : members_) in[s] = true;
  return in;
}

StateSubset StateSubset::complement() const {
  const auto in = indicator();
  std::vector<State> out;
  for (int i = 0; i < universe_; ++i)
    if (!in[i]) out.push_back(i);
  return StateSubset(std::move(out), universe_);
}

StateSubset StateSubset::unite(const StateSubset& other) const {
  if (other.universe_ != universe_) throw DimensionError("subset universes differ");
  std::vector<State> out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out));
  return StateSubset(std::move(out), universe_);
}

StateSubset StateSubset::minus(const StateSubset& other) const {
  if (other.universe_ != universe_) throw DimensionError("subset universes differ");
  std::vector<State> out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                      std::back_inserter(out));
  return StateSubset(std::move(out), universe_);
}

bool StateSubset::disjoint(const StateSubset& other) const {
  for (State s : members_)
    if (other.contains(s)) return false;
  return true;
}

bool StateSubset::subset_of(const StateSubset& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

std::string StateSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i];
  os << '}';
  return os.str();
}

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : p_(std::move(entries)) {
  if (p_.rows() == 0 || p_.rows() != p_.cols())
    throw DimensionError("transition matrix must be square and nonempty");
  const Eigen::Index n = p_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(p_(i, j)) || p_(i, j) < 0.0)
        throw InvariantError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative or not finite");
      if (std::abs(p_(i, j) - p_(j, i)) > kStochasticTol)
        throw InvariantError("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    const double row = p_.row(i).sum();
    if (std::abs(row - 1.0) > kStochasticTol)
      throw InvariantError("row " + std::to_string(i) + " sums to " + std::to_string(row));
  }
}

StochasticMatrix::StochasticMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : StochasticMatrix([&] {
        const auto n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd m(n, n);
        Eigen::Index i = 0;
        for (const auto& r : rows) {
          if (static_cast<Eigen::Index>(r.size()) != n) throw DimensionError("ragged matrix literal");
          Eigen::Index j = 0;
          for (double v : r) m(i, j++) = v;
          ++i;
        }
        return m;
      }()) {}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double s = out.row(i).sum();
    if (s <= 0.0) throw std::invalid_argument("cannot normalize a zero row");
    out.row(i) /= s;
  }
  return out;
}

Distribution::Distribution(Eigen::VectorXd probs) : p_(std::move(probs)) {
  if (p_.size() == 0) throw DimensionError("empty distribution");
  for (Eigen::Index i = 0; i < p_.size(); ++i)
    if (!std::isfinite(p_(i)) || p_(i) < 0.0) throw InvariantError("distribution has a negative entry");
  if (std::abs(p_.sum() - 1.0) > kStochasticTol) throw InvariantError("distribution does not sum to 1");
}

Distribution::Distribution(std::initializer_list<double> probs)
    : Distribution(Eigen::Map<const Eigen::VectorXd>(probs.begin(), static_cast<Eigen::Index>(probs.size()))) {}

Distribution Distribution::point_mass(int support, int at) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(support);
  v(at) = 1.0;
  return Distribution(std::move(v));
}

Distribution Distribution::uniform(int support) {
  return Distribution(Eigen::VectorXd::Constant(support, 1.0 / support));
}

Eigen::MatrixXd sq_matrix(const StochasticMatrix& p, const StochasticMatrix& q) {
  if (p.size() != q.size()) throw DimensionError("sq_matrix: dimension mismatch");
  return p.matrix().cwiseProduct(q.matrix()).cwiseSqrt();
}

bool is_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd symmetric_eigenvalues_desc(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() == 0) return {};
  if (!is_symmetric(m)) throw std::invalid_argument("eigenvalues requested for a non-symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  Eigen::VectorXd ev = solver.eigenvalues().reverse();
  return ev;
}

double spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() == 0) return 0.0;
  return symmetric_eigenvalues_desc(m)(0);
}

double spectral_norm_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() == 0) return 0.0;
  return symmetric_eigenvalues_desc(m).cwiseAbs().maxCoeff();
}

double chain_distance(const StochasticMatrix& p, const StochasticMatrix& q) {
  const double d = 1.0 - spectral_radius(sq_matrix(p, q));
  return std::clamp(d, 0.0, 1.0);
}

double hellinger_sq(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw DimensionError("hellinger_sq: support mismatch");
  const double bc = p.probs().cwiseProduct(q.probs()).cwiseSqrt().sum();
  return std::clamp(1.0 - bc, 0.0, 1.0);
}

double total_variation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw DimensionError("total_variation: support mismatch");
  return std::clamp(0.5 * (p.probs() - q.probs()).cwiseAbs().sum(), 0.0, 1.0);
}

}  // namespace mcid
