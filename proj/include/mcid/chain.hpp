#pragma once

#include "mcid/linalg.hpp"
#include "mcid/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mcid {

/// Finite sample path X_0, X_1, ... over the universe [0, n).
struct Trajectory {
  std::vector<State> states;
  std::uint64_t seed = 0;
  int n = 0;

  std::size_t length() const { return states.size(); }
  /// Throws if any state lies outside [0, n).
  void validate() const;
};

/// Per-row cumulative sums used to draw the next state.
class TransitionSampler {
 public:
  explicit TransitionSampler(const StochasticMatrix& p);
  State next(State from, Rng& rng) const;
  State draw_start(const Distribution& start, Rng& rng) const;

 private:
  Eigen::MatrixXd cdf_;  // row-wise cumulative
};

Trajectory simulate(const StochasticMatrix& p, const Distribution& start, std::size_t length, std::uint64_t seed);
Trajectory simulate_from(const StochasticMatrix& p, State start, std::size_t length, std::uint64_t seed);

class TrajectoryCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trajectory extended on demand, standing in for an infinite word. Reading past
/// `cap` steps throws instead of truncating.
class LazyTrajectory {
 public:
  static constexpr std::size_t kDefaultCap = 10'000'000;

  LazyTrajectory(const StochasticMatrix& p, State start, std::uint64_t seed, std::size_t cap = kDefaultCap);

  State at(std::size_t i);
  std::size_t generated() const { return states_.size(); }
  std::size_t cap() const { return cap_; }

 private:
  TransitionSampler sampler_;
  Rng rng_;
  std::vector<State> states_;
  std::size_t cap_;
};

/// Transition matrix of the process recorded only on visits to T:
/// Q = P_T + P_{T,T̄} (I - P_T̄)^{-1} P_{T̄,T}.
StochasticMatrix observed_chain(const StochasticMatrix& p, const StateSubset& T);

/// Entries of w lying in T, order preserved. States keep their original labels.
Trajectory restrict_trajectory(const Trajectory& w, const StateSubset& T);

/// max over i != j of E[first time at j | start at i].
double hitting_time_exact(const StochasticMatrix& p);

/// Number of entries of w outside T.
std::size_t escape_count(const Trajectory& w, const StateSubset& T);

/// Empirical transition counts, counts(i, j) = #{t : w_t = i, w_{t+1} = j}.
Eigen::MatrixXd transition_counts(const Trajectory& w);

}  // namespace mcid
