#include "mcid/chain.hpp"

#include <algorithm>
#include <string>

namespace mcid {

void Trajectory::validate() const {
  for (State s : states)
    if (s < 0 || s >= n) throw std::out_of_range("trajectory state " + std::to_string(s) + " outside [0, n)");
}

TransitionSampler::TransitionSampler(const StochasticMatrix& p) : cdf_(p.matrix()) {
  for (Eigen::Index i = 0; i < cdf_.rows(); ++i)
    for (Eigen::Index j = 1; j < cdf_.cols(); ++j) cdf_(i, j) += cdf_(i, j - 1);
}

namespace {

State search_row(const Eigen::Ref<const Eigen::RowVectorXd>& row, double u) {
  const Eigen::Index n = row.size();
  // First index whose cumulative mass exceeds u; zero-probability entries never qualify.
  Eigen::Index lo = 0, hi = n - 1;
  while (lo < hi) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (row(mid) > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return static_cast<State>(lo);
}

}  // namespace

State TransitionSampler::next(State from, Rng& rng) const {
  const auto row = cdf_.row(from);
  return search_row(row, rng.uniform() * row(row.size() - 1));
}

State TransitionSampler::draw_start(const Distribution& start, Rng& rng) const {
  if (start.size() != cdf_.rows()) throw DimensionError("start distribution size differs from state count");
  Eigen::RowVectorXd cum(start.size());
  double acc = 0.0;
  for (int i = 0; i < start.size(); ++i) cum(i) = acc += start[i];
  return search_row(cum, rng.uniform() * acc);
}

namespace {

Trajectory walk(const TransitionSampler& sampler, State first, std::size_t length, Rng& rng, std::uint64_t seed, int n) {
  Trajectory w{{}, seed, n};
  w.states.reserve(length);
  w.states.push_back(first);
  while (w.states.size() < length) w.states.push_back(sampler.next(w.states.back(), rng));
  return w;
}

}  // namespace

Trajectory simulate(const StochasticMatrix& p, const Distribution& start, std::size_t length, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("simulate: length must be at least 1");
  const TransitionSampler sampler(p);
  Rng rng(seed);
  const State first = sampler.draw_start(start, rng);
  return walk(sampler, first, length, rng, seed, p.size());
}

// No start draw here, so the walk matches LazyTrajectory under the same seed.
Trajectory simulate_from(const StochasticMatrix& p, State start, std::size_t length, std::uint64_t seed) {
  if (start < 0 || start >= p.size()) throw std::out_of_range("simulate: start state outside [0, n)");
  if (length < 1) throw std::invalid_argument("simulate: length must be at least 1");
  const TransitionSampler sampler(p);
  Rng rng(seed);
  return walk(sampler, start, length, rng, seed, p.size());
}

LazyTrajectory::LazyTrajectory(const StochasticMatrix& p, State start, std::uint64_t seed, std::size_t cap)
    : sampler_(p), rng_(seed), cap_(cap) {
  if (start < 0 || start >= p.size()) throw std::out_of_range("start state outside [0, n)");
  states_.push_back(start);
}

State LazyTrajectory::at(std::size_t i) {
  if (i >= cap_) throw TrajectoryCapExceeded("trajectory cap of " + std::to_string(cap_) + " steps exceeded");
  while (states_.size() <= i) states_.push_back(sampler_.next(states_.back(), rng_));
  return states_[i];
}

StochasticMatrix observed_chain(const StochasticMatrix& p, const StateSubset& T) {
  if (T.universe_size() != p.size()) throw DimensionError("observed_chain: T universe mismatch");
  if (T.empty()) throw std::invalid_argument("observed_chain: T must be nonempty");
  if (T.is_full()) return p;
  const StateSubset out = T.complement();
  const Eigen::MatrixXd& m = p.matrix();
  const Eigen::MatrixXd p_tt = m(T.members(), T.members());
  const Eigen::MatrixXd p_to = m(T.members(), out.members());
  const Eigen::MatrixXd p_ot = m(out.members(), T.members());
  const Eigen::MatrixXd p_oo = m(out.members(), out.members());
  const Eigen::MatrixXd resolvent_lhs = Eigen::MatrixXd::Identity(out.size(), out.size()) - p_oo;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(resolvent_lhs);
  if (!(lu.rcond() > 1e-13))
    throw std::domain_error("observed_chain: I - P_out is singular (mass never returns to T)");
  Eigen::MatrixXd q = p_tt + p_to * lu.solve(p_ot);
  return StochasticMatrix(std::move(q));
}

Trajectory restrict_trajectory(const Trajectory& w, const StateSubset& T) {
  Trajectory out{{}, w.seed, w.n};
  std::copy_if(w.states.begin(), w.states.end(), std::back_inserter(out.states),
               [&](State s) { return T.contains(s); });
  return out;
}

double hitting_time_exact(const StochasticMatrix& p) {
  const int n = p.size();
  if (n == 1) return 0.0;
  const Eigen::MatrixXd& m = p.matrix();
  double worst = 0.0;
  for (int target = 0; target < n; ++target) {
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
      if (i != target) others.push_back(i);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n - 1, n - 1) - m(others, others);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(lu.rcond() > 1e-15)) throw std::domain_error("hitting_time_exact: chain is reducible");
    const Eigen::VectorXd h = lu.solve(Eigen::VectorXd::Ones(n - 1));
    if (!h.allFinite() || h.minCoeff() < 1.0 - 1e-9) throw std::domain_error("hitting_time_exact: chain is reducible");
    worst = std::max(worst, h.maxCoeff());
  }
  return worst;
}

std::size_t escape_count(const Trajectory& w, const StateSubset& T) {
  return static_cast<std::size_t>(
      std::count_if(w.states.begin(), w.states.end(), [&](State s) { return !T.contains(s); }));
}

Eigen::MatrixXd transition_counts(const Trajectory& w) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(w.n, w.n);
  for (std::size_t t = 0; t + 1 < w.states.size(); ++t) c(w.states[t], w.states[t + 1]) += 1.0;
  return c;
}

}  // namespace mcid
